import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 240_000,
    // The e2e suite boots one engine process; parallel files would race on it.
    fileParallelism: false,
  },
});
