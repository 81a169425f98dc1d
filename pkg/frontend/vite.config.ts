import { defineConfig } from "vite";

// The dev server proxies API calls to a locally running `melodist serve`.
export default defineConfig({
  server: {
    proxy: Object.fromEntries(
      ["/generate", "/songs", "/evaluate"].map((route) => [
        route,
        { target: "http://127.0.0.1:8000", changeOrigin: true },
      ])
    ),
  },
  build: { outDir: "dist", chunkSizeWarningLimit: 1500 },
});
