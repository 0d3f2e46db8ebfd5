/** Small deterministic force layout: repulsion, springs, centering.
 *
 * Node counts stay in the hundreds (depth-limited neighborhoods), so the
 * quadratic repulsion pass is fine and avoids a bundler dependency.
 */

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  seed?: number;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function runLayout(
  nodeIds: string[],
  edges: Array<[string, string]>,
  options: LayoutOptions,
): Map<string, Point> {
  const { width, height } = options;
  const iterations = options.iterations ?? 150;
  const rand = mulberry32(options.seed ?? 1);
  const n = nodeIds.length;
  const out = new Map<string, Point>();
  if (n === 0) return out;

  const index = new Map(nodeIds.map((id, i) => [id, i]));
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  const vxs = new Float64Array(n);
  const vys = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    xs[i] = (rand() - 0.5) * width * 0.8 + width / 2;
    ys[i] = (rand() - 0.5) * height * 0.8 + height / 2;
  }
  const links: Array<[number, number]> = [];
  for (const [a, b] of edges) {
    const i = index.get(a);
    const j = index.get(b);
    if (i !== undefined && j !== undefined && i !== j) links.push([i, j]);
  }

  const area = width * height;
  const k = Math.sqrt(area / n) * 0.6; // preferred edge length
  let temperature = width / 8;
  const cool = 0.95;

  for (let it = 0; it < iterations; it++) {
    vxs.fill(0);
    vys.fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) {
          dx = rand() - 0.5;
          dy = rand() - 0.5;
          d2 = dx * dx + dy * dy;
        }
        const d = Math.sqrt(d2);
        const force = (k * k) / d;
        const fx = (dx / d) * force;
        const fy = (dy / d) * force;
        vxs[i] += fx;
        vys[i] += fy;
        vxs[j] -= fx;
        vys[j] -= fy;
      }
    }
    for (const [i, j] of links) {
      const dx = xs[i] - xs[j];
      const dy = ys[i] - ys[j];
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-3);
      const force = (d * d) / k;
      const fx = (dx / d) * force;
      const fy = (dy / d) * force;
      vxs[i] -= fx;
      vys[i] -= fy;
      vxs[j] += fx;
      vys[j] += fy;
    }
    for (let i = 0; i < n; i++) {
      // gentle pull to the canvas center keeps components on screen
      vxs[i] += (width / 2 - xs[i]) * 0.02;
      vys[i] += (height / 2 - ys[i]) * 0.02;
      const v = Math.sqrt(vxs[i] * vxs[i] + vys[i] * vys[i]);
      if (v > 0) {
        const step = Math.min(v, temperature);
        xs[i] += (vxs[i] / v) * step;
        ys[i] += (vys[i] / v) * step;
      }
      xs[i] = Math.min(width - 10, Math.max(10, xs[i]));
      ys[i] = Math.min(height - 10, Math.max(10, ys[i]));
    }
    temperature = Math.max(temperature * cool, 0.5);
  }

  nodeIds.forEach((id, i) => out.set(id, { x: xs[i], y: ys[i] }));
  return out;
}
