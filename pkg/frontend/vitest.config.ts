import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // node environment: tests talk to the live service with native fetch
    // and build their own happy-dom Window where they need a document.
    environment: "node",
    globalSetup: "./test/global-setup.ts",
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});
