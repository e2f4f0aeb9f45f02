// Job polling: 500 ms base interval with multiplicative backoff, capped.
// Desk-scale jobs finish in seconds to minutes; polling suffices.

import type { GatewayClient } from "./api.js";
import type { JobState } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  timeoutMs?: number;
  onProgress?: (state: JobState) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((res) => setTimeout(res, ms));

export async function pollJob(
  client: GatewayClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobState> {
  const {
    intervalMs = 500,
    backoff = 1.5,
    maxIntervalMs = 5000,
    timeoutMs = 15 * 60 * 1000,
    onProgress,
    sleep = defaultSleep,
  } = options;
  let wait = intervalMs;
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const state = await client.jobState(jobId);
    onProgress?.(state);
    if (state.state === "done" || state.state === "failed") return state;
    if (Date.now() > deadline) throw new Error(`job ${jobId} timed out while polling`);
    await sleep(wait);
    wait = Math.min(maxIntervalMs, wait * backoff);
  }
}
