/** Coalesced job-list polling that stops once every visible job is terminal. */

import { allTerminal } from "./jobs.js";
import type { JobSummary } from "./types.js";

export type FetchJobs = () => Promise<JobSummary[]>;
export type JobsListener = (jobs: JobSummary[]) => void;

export const DEFAULT_POLL_INTERVAL_MS = 3000;

export class JobListPoller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly fetchJobs: FetchJobs,
    private readonly onUpdate: JobsListener,
    private readonly intervalMs: number = DEFAULT_POLL_INTERVAL_MS,
  ) {}

  get running(): boolean {
    return this.timer !== null;
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
    void this.tick();
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** One poll cycle; concurrent calls coalesce into the in-flight one. */
  async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const jobs = await this.fetchJobs();
      this.onUpdate(jobs);
      if (allTerminal(jobs)) this.stop();
    } catch {
      // transient fetch failure: keep polling
    } finally {
      this.inFlight = false;
    }
  }

  /** Restart after a new submission made the list non-terminal again. */
  kick(): void {
    if (!this.running) this.start();
    else void this.tick();
  }
}
