import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    // dev server forwards game traffic to `hexq serve` so the page and the
    // API share an origin
    proxy: {
      "/game": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // the end-to-end suite boots the python engine server, which shares the
    // box with whatever else is running; keep generous ceilings
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
