/** Layer colors are a pure function of the ontology's layer list. */

const PALETTE = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#e45756",
  "#b279a2",
  "#72b7b2",
  "#eeca3b",
  "#9d755d",
];

export function layerColor(layer: string, layers: string[]): string {
  const idx = layers.indexOf(layer);
  if (idx < 0) return "#888888";
  return PALETTE[idx % PALETTE.length];
}

export interface LegendEntry {
  layer: string;
  color: string;
  enabled: boolean;
}

export function buildLegend(layers: string[], isEnabled: (layer: string) => boolean): LegendEntry[] {
  return layers.map((layer) => ({
    layer,
    color: layerColor(layer, layers),
    enabled: isEnabled(layer),
  }));
}
