/** Truck-factor details modal: developer table plus the node's file list.
 *
 * Rows are direct projections of document fields; the developer order is the
 * one the service ships (sorted descending by authored files).
 */

import { formatImportance } from "./format.js";
import type { ReportNode, TfDeveloper, TopFile } from "./types.js";

export interface DeveloperRow {
  id: string;
  name: string;
  email: string;
  authoredFileCount: number;
  authoredFiles: string[];
  activeLabel: "active" | "inactive";
}

export interface FileRow {
  path: string;
  importance: string;
  activeAuthors: number;
}

export function developerRows(node: ReportNode): DeveloperRow[] {
  return node.tfDevelopers.map((dev: TfDeveloper) => ({
    id: dev.id,
    name: dev.name,
    email: dev.email,
    authoredFileCount: dev.authoredFileCount,
    authoredFiles: [...dev.authoredFiles],
    activeLabel: dev.active ? "active" : "inactive",
  }));
}

export function fileRows(node: ReportNode): FileRow[] {
  return node.topFiles.map((top: TopFile) => ({
    path: top.path,
    importance: formatImportance(top.importance),
    activeAuthors: top.activeAuthors,
  }));
}
