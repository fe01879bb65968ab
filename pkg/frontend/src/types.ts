/** Wire types mirroring the service's JSON contract (docs/report.schema.json). */

export interface TruckFactorBlock {
  value: number;
  removedDevelopers: string[];
}

export interface TfDeveloper {
  id: string;
  name: string;
  email: string;
  authoredFileCount: number;
  authoredFiles: string[];
  active: boolean;
}

export interface TopFile {
  path: string;
  importance: number;
  activeAuthors: number;
}

export interface ReportNode {
  name: string;
  kind: "directory" | "file";
  fileCount: number;
  truckFactor: TruckFactorBlock;
  tfDevelopers: TfDeveloper[];
  topFiles: TopFile[];
  children: ReportNode[];
}

export interface ReportSummary {
  headCommit: string;
  referenceTs: number;
  developers: number;
  commits: number;
  files: number;
  truckFactor: number;
}

export interface ReportDeveloper {
  id: string;
  name: string;
  email: string;
  active: boolean;
}

export interface ReportDocument {
  schemaVersion: string;
  repository: { url: string; branch: string | null };
  summary: ReportSummary;
  tree: ReportNode;
  developers: ReportDeveloper[];
  config: Record<string, unknown>;
}

export interface JobSummary {
  jobId: string;
  url: string;
  branch: string | null;
  startedAt: number;
  stage: string;
  finishedAt?: number;
  resultId?: string;
  error?: string;
}

export interface Session {
  token: string;
  expiresAt: number;
  userId: string;
  username: string;
}
