/** Thin fetch wrapper around the analysis service endpoints. */

import type { JobSummary, ReportDocument } from "./types.js";

export const START_PROCESS_PATH =
  "/git-repository-version-process/start-git-repository-version-process";
export const LIST_PROCESSES_PATH = "/git-repository-version-process/user/";
export const GET_RESULT_PATH = "/git-repository-version/";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  token: string | null = null;

  constructor(readonly baseUrl: string) {}

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  register(username: string, credential: string): Promise<{ userId: string }> {
    return this.request("POST", "/auth/register", { username, credential });
  }

  login(
    username: string,
    credential: string,
  ): Promise<{ token: string; expiresAt: number; userId: string }> {
    return this.request("POST", "/auth/login", { username, credential });
  }

  startAnalysis(url: string, branch: string | null): Promise<{ jobId: string }> {
    const body: { url: string; branch?: string } = { url };
    if (branch) body.branch = branch;
    return this.request("POST", START_PROCESS_PATH, body);
  }

  listJobs(userId: string): Promise<JobSummary[]> {
    return this.request("GET", LIST_PROCESSES_PATH + encodeURIComponent(userId));
  }

  getResult(resultId: string): Promise<ReportDocument> {
    return this.request("GET", GET_RESULT_PATH + encodeURIComponent(resultId));
  }
}
