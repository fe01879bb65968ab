import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { formatImportance, summaryLabels } from "../src/format.js";
import { developerRows, fileRows } from "../src/modal.js";
import type { ReportDocument } from "../src/types.js";

const report: ReportDocument = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "report.json"), "utf-8"),
);

describe("developerRows", () => {
  it("is sorted descending by authored file count", () => {
    const rows = developerRows(report.tree);
    const counts = rows.map((row) => row.authoredFileCount);
    expect(counts).toEqual([...counts].sort((a, b) => b - a));
    expect(counts.length).toBeGreaterThan(1);
  });

  it("binds every cell to the document fields", () => {
    const rows = developerRows(report.tree);
    report.tree.tfDevelopers.forEach((dev, index) => {
      const row = rows[index]!;
      expect(row.name).toBe(dev.name);
      expect(row.email).toBe(dev.email);
      expect(row.authoredFileCount).toBe(dev.authoredFileCount);
      expect(row.activeLabel).toBe(dev.active ? "active" : "inactive");
    });
  });

  it("expansion list length equals the authored file count", () => {
    for (const row of developerRows(report.tree)) {
      expect(row.authoredFiles.length).toBe(row.authoredFileCount);
    }
  });

  it("flags developers inactive after a year without commits", () => {
    const docs = report.tree.children.find((c) => c.name === "docs")!;
    const rows = developerRows(docs);
    const carol = rows.find((r) => r.email.startsWith("carol"))!;
    const bob = rows.find((r) => r.email.startsWith("bob"))!;
    expect(carol.activeLabel).toBe("inactive"); // 400 days
    expect(bob.activeLabel).toBe("active"); // exactly 365 days
  });
});

describe("fileRows", () => {
  it("renders importance exactly as the 5-decimal document value", () => {
    const rows = fileRows(report.tree);
    report.tree.topFiles.forEach((top, index) => {
      expect(rows[index]!.path).toBe(top.path);
      expect(rows[index]!.importance).toBe(top.importance.toFixed(5));
      expect(rows[index]!.activeAuthors).toBe(top.activeAuthors);
    });
  });

  it("keeps the document's importance ordering", () => {
    const importances = report.tree.topFiles.map((top) => top.importance);
    expect(importances).toEqual([...importances].sort((a, b) => b - a));
  });

  it("formats importance with exactly five decimals", () => {
    expect(formatImportance(1)).toBe("1.00000");
    expect(formatImportance(7.922490001)).toBe("7.92249");
  });
});

describe("summaryLabels", () => {
  it("binds the header numbers to the summary block", () => {
    const labels = summaryLabels(report);
    expect(labels.developers).toBe(String(report.summary.developers));
    expect(labels.commits).toBe(String(report.summary.commits));
    expect(labels.files).toBe(String(report.summary.files));
    expect(labels.truckFactor).toBe(String(report.summary.truckFactor));
    expect(labels.headCommit).toBe(report.summary.headCommit);
    expect(labels.url).toBe(report.repository.url);
  });

  it("renders the default branch placeholder", () => {
    expect(summaryLabels(report).branch).toBe("(default)");
  });
});
