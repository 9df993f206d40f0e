/**
 * Boots one real query service for the whole test run. The UI package
 * talks to the HTTP API only, so the tests do too.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { dirname, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import type { GlobalSetupContext } from "vitest/node";

declare module "vitest" {
  export interface ProvidedContext {
    apiBase: string;
  }
}

let proc: ChildProcess;

export default async function setup({ provide }: GlobalSetupContext): Promise<() => void> {
  const here = dirname(fileURLToPath(import.meta.url));
  const data = resolve(here, "..", "..", "fixtures", "mini");
  const port = 8750 + Math.floor(Math.random() * 200);
  const base = `http://127.0.0.1:${port}`;

  proc = spawn("schenql", ["serve", "--data", data, "--port", String(port)], {
    stdio: ["ignore", "ignore", "pipe"],
  });
  let stderr = "";
  proc.stderr?.on("data", (chunk) => (stderr += chunk));

  let ready = false;
  for (let i = 0; i < 100 && !ready; i++) {
    if (proc.exitCode !== null) break;
    try {
      const resp = await fetch(`${base}/api/suggest?q=`);
      ready = resp.ok;
    } catch {
      await new Promise((r) => setTimeout(r, 100));
    }
  }
  if (!ready) {
    proc.kill();
    throw new Error(`query service failed to start on ${base}\n${stderr}`);
  }

  provide("apiBase", base);
  return () => {
    proc.kill();
  };
}
