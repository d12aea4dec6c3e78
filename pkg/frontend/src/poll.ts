/** Poll a training job until it reaches a terminal state. */

import type { Api, JobStatus } from "./api.js";

const sleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

/**
 * Polls every `intervalMs` (default 500), invoking `onUpdate` for every
 * status seen, and resolves with the terminal status document.
 */
export async function pollJob(
  api: Api,
  sid: string,
  jid: string,
  onUpdate: (doc: JobStatus) => void,
  intervalMs = 500,
  maxPolls = 2400,
): Promise<JobStatus> {
  for (let i = 0; i < maxPolls; i++) {
    const doc = await api.jobStatus(sid, jid);
    onUpdate(doc);
    if (doc.status === "done" || doc.status === "failed") {
      return doc;
    }
    await sleep(intervalMs);
  }
  throw new Error("training job did not finish");
}
