import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'happy-dom',
    // tests drive the wizard against live engine servers on localhost ports;
    // the deployed bundle is served same-origin by the engine itself
    environmentOptions: {
      happyDOM: {
        settings: {
          fetch: { disableSameOriginPolicy: true },
        },
      },
    },
    include: ['tests/**/*.test.ts'],
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
