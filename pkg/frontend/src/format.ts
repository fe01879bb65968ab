/** Pure bindings from report/job fields to display strings.
 *
 * The UI never recomputes an analysis number: every label below is a direct
 * formatting of one document field, so tests can check the binding exactly.
 */

import type { JobSummary, ReportDocument, ReportNode } from "./types.js";

export function formatImportance(value: number): string {
  return value.toFixed(5);
}

export function formatTimestamp(epochSeconds: number): string {
  return new Date(epochSeconds * 1000).toISOString().replace("T", " ").slice(0, 19);
}

const STAGE_LABELS: Record<string, string> = {
  Initialized: "Process Initialized",
  Cloning: "Cloning repository",
  ExtractingHistory: "Extracting history",
  ComputingDoe: "Computing expertise",
  ComputingTruckFactor: "Computing truck factor",
  Finished: "Process Finished",
  Failed: "Process Failed",
};

export function stageLabel(stage: string): string {
  return STAGE_LABELS[stage] ?? stage;
}

export function nodeLabel(node: ReportNode): string {
  return `${node.name} [TF=${node.truckFactor.value}]`;
}

export interface SummaryLabels {
  url: string;
  branch: string;
  headCommit: string;
  analyzedAt: string;
  developers: string;
  commits: string;
  files: string;
  truckFactor: string;
}

export function summaryLabels(document: ReportDocument): SummaryLabels {
  return {
    url: document.repository.url,
    branch: document.repository.branch ?? "(default)",
    headCommit: document.summary.headCommit,
    analyzedAt: formatTimestamp(document.summary.referenceTs),
    developers: String(document.summary.developers),
    commits: String(document.summary.commits),
    files: String(document.summary.files),
    truckFactor: String(document.summary.truckFactor),
  };
}

export function jobStartedLabel(job: JobSummary): string {
  return formatTimestamp(job.startedAt);
}
