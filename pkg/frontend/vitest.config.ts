import { defineConfig } from "vitest/config";

// Every assertion ultimately shells out to the Python CLI, so the per-test
// budget is dominated by interpreter cold starts, not vitest overhead.
export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 240_000,
    hookTimeout: 60_000,
  },
});
