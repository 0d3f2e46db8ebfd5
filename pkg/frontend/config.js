// Runtime configuration: point the explorer at a running graph API.
window.__GRAPHILOSOPHY_EXPLORER__ = {
  serverOrigin: "http://127.0.0.1:8750",
};
