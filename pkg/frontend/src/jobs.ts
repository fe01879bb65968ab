/** Job table view-model: polling rows with the Details gate. */

import { jobStartedLabel, stageLabel } from "./format.js";
import type { JobSummary } from "./types.js";

export const TERMINAL_STAGES = new Set(["Finished", "Failed"]);

export interface JobRow {
  jobId: string;
  url: string;
  branch: string;
  startedAt: string;
  stage: string;
  failed: boolean;
  error: string | null;
  /** Details is reachable only once the job finished successfully. */
  detailsEnabled: boolean;
  resultId: string | null;
}

export function toJobRow(job: JobSummary): JobRow {
  const finished = job.stage === "Finished" && Boolean(job.resultId);
  return {
    jobId: job.jobId,
    url: job.url,
    branch: job.branch ?? "(default)",
    startedAt: jobStartedLabel(job),
    stage: stageLabel(job.stage),
    failed: job.stage === "Failed",
    error: job.error ?? null,
    detailsEnabled: finished,
    resultId: finished ? (job.resultId as string) : null,
  };
}

export function toJobRows(jobs: JobSummary[]): JobRow[] {
  return jobs.map(toJobRow);
}

export function allTerminal(jobs: JobSummary[]): boolean {
  return jobs.every((job) => TERMINAL_STAGES.has(job.stage));
}
