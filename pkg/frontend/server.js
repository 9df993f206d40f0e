/**
 * Dev server: static files from public/ plus an /api proxy to the query
 * service, so the page and the API share an origin. No dependencies.
 *
 *   node server.js [--port 5173] [--backend http://127.0.0.1:8000]
 */

import { createServer, request as httpRequest } from "node:http";
import { readFile } from "node:fs/promises";
import { extname, join, normalize } from "node:path";
import { fileURLToPath } from "node:url";

const args = process.argv.slice(2);
const opt = (name, fallback) => {
  const i = args.indexOf(`--${name}`);
  return i >= 0 && args[i + 1] ? args[i + 1] : fallback;
};
const PORT = Number(opt("port", "5173"));
const BACKEND = new URL(opt("backend", "http://127.0.0.1:8000"));
const ROOT = join(fileURLToPath(new URL(".", import.meta.url)), "public");

const TYPES = {
  ".html": "text/html; charset=utf-8",
  ".css": "text/css; charset=utf-8",
  ".js": "text/javascript; charset=utf-8",
  ".svg": "image/svg+xml",
};

createServer((req, res) => {
  if (req.url.startsWith("/api/")) {
    const proxy = httpRequest(
      {
        hostname: BACKEND.hostname,
        port: BACKEND.port,
        path: req.url,
        method: req.method,
        headers: { ...req.headers, host: BACKEND.host },
      },
      (upstream) => {
        res.writeHead(upstream.statusCode, upstream.headers);
        upstream.pipe(res);
      },
    );
    proxy.on("error", () => {
      res.writeHead(502, { "content-type": "application/json" });
      res.end(JSON.stringify({ code: "bad_gateway", message: "query service unreachable" }));
    });
    req.pipe(proxy);
    return;
  }

  const path = req.url === "/" ? "/index.html" : req.url.split("?")[0];
  const file = normalize(join(ROOT, path));
  if (!file.startsWith(ROOT)) {
    res.writeHead(403);
    res.end();
    return;
  }
  readFile(file)
    .then((data) => {
      res.writeHead(200, { "content-type": TYPES[extname(file)] ?? "application/octet-stream" });
      res.end(data);
    })
    .catch(() => {
      res.writeHead(404, { "content-type": "text/plain" });
      res.end("not found");
    });
}).listen(PORT, "127.0.0.1", () => {
  console.log(`ui on http://127.0.0.1:${PORT} -> api ${BACKEND.origin}`);
});
