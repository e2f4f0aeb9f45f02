// Spawns the real gateway service for UI tests that need the live API.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface LiveServer {
  baseUrl: string;
  stop(): Promise<void>;
}

export async function startGateway(): Promise<LiveServer> {
  const port = 8900 + Math.floor(Math.random() * 900);
  const stateDir = mkdtempSync(join(tmpdir(), "thermstack-ui-"));
  const proc: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "thermstack.gateway.cli",
      "serve",
      "--bind",
      `127.0.0.1:${port}`,
      "--state-dir",
      stateDir,
      "--workers",
      "2",
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  proc.stderr?.on("data", (d) => (stderr += String(d)));

  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`gateway exited early (code ${proc.exitCode}): ${stderr}`);
    }
    try {
      const resp = await fetch(`${baseUrl}/designs/__probe__`);
      if (resp.status === 404) break; // service is answering
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error(`gateway did not come up on ${baseUrl}: ${stderr}`);
    }
    await new Promise((res) => setTimeout(res, 150));
  }
  return {
    baseUrl,
    stop: () =>
      new Promise<void>((resolve) => {
        proc.once("exit", () => resolve());
        proc.kill("SIGTERM");
        setTimeout(() => {
          if (proc.exitCode === null) proc.kill("SIGKILL");
          resolve();
        }, 5000);
      }),
  };
}
