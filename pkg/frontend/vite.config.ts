/// <reference types="vitest" />
import { defineConfig } from 'vite';

export default defineConfig({
  server: {
    // the backend owns /api; run it with: python -m causal_assembly.service
    proxy: {
      '/api': 'http://127.0.0.1:8000',
    },
  },
  test: {
    environment: 'jsdom',
  },
});
