/** DOM wiring: login, the clone form + job table, and the detail page. */

import { ApiClient, ApiError } from "./api.js";
import { nodeLabel, summaryLabels } from "./format.js";
import { toJobRows } from "./jobs.js";
import { developerRows, fileRows } from "./modal.js";
import { JobListPoller } from "./polling.js";
import { TreeView } from "./tree.js";
import type { ReportDocument, ReportNode, Session } from "./types.js";

const DEFAULT_API_BASE = "http://127.0.0.1:8000";

let api = new ApiClient(DEFAULT_API_BASE);
let session: Session | null = null;
let poller: JobListPoller | null = null;

const app = () => document.getElementById("app") as HTMLElement;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function banner(kind: "error" | "info", text: string): HTMLElement {
  return el("div", { class: `banner ${kind}` }, text);
}

function restoreSession(): void {
  const raw = sessionStorage.getItem("repoknowledge-session");
  if (!raw) return;
  try {
    const saved = JSON.parse(raw) as Session & { apiBase: string };
    api = new ApiClient(saved.apiBase);
    api.token = saved.token;
    session = saved;
  } catch {
    sessionStorage.removeItem("repoknowledge-session");
  }
}

function saveSession(apiBase: string): void {
  if (session) {
    sessionStorage.setItem(
      "repoknowledge-session",
      JSON.stringify({ ...session, apiBase }),
    );
  }
}

// ---- login ------------------------------------------------------------------

function renderLogin(): void {
  poller?.stop();
  const username = el("input", { placeholder: "username", value: "" });
  const credential = el("input", { placeholder: "credential", type: "password" });
  const base = el("input", { value: api.baseUrl });
  const message = el("div");

  const submit = async (register: boolean) => {
    message.replaceChildren();
    api = new ApiClient(base.value.replace(/\/$/, ""));
    try {
      if (register) await api.register(username.value, credential.value);
      const login = await api.login(username.value, credential.value);
      api.token = login.token;
      session = {
        token: login.token,
        expiresAt: login.expiresAt,
        userId: login.userId,
        username: username.value,
      };
      saveSession(api.baseUrl);
      location.hash = "#/home";
    } catch (error) {
      message.replaceChildren(
        banner("error", error instanceof Error ? error.message : String(error)),
      );
    }
  };

  app().replaceChildren(
    el(
      "div",
      { class: "card narrow" },
      el("h1", {}, "repoknowledge"),
      el("p", {}, "Sign in to clone and analyze repositories."),
      el("label", {}, "API address", base),
      el("label", {}, "Username", username),
      el("label", {}, "Credential (min 8 chars)", credential),
      el(
        "div",
        { class: "row" },
        button("Log in", () => void submit(false)),
        button("Register + log in", () => void submit(true), "secondary"),
      ),
      message,
    ),
  );
}

function button(
  label: string,
  onClick: () => void,
  variant = "primary",
): HTMLButtonElement {
  const node = el("button", { class: variant }, label);
  node.addEventListener("click", onClick);
  return node;
}

// ---- home: clone form + job table ---------------------------------------------

function renderHome(): void {
  if (!session) {
    location.hash = "#/login";
    return;
  }
  poller?.stop();

  const url = el("input", { placeholder: "https://github.com/owner/repo.git" });
  const branch = el("input", { placeholder: "branch (optional)" });
  const message = el("div");
  const tableHost = el("div");

  const refresh = async () => {
    if (!session) return;
    const jobs = await api.listJobs(session.userId);
    renderJobTable(tableHost, jobs);
  };

  poller = new JobListPoller(
    () => api.listJobs(session?.userId ?? ""),
    (jobs) => renderJobTable(tableHost, jobs),
  );

  const start = async () => {
    message.replaceChildren();
    if (!url.value.trim()) {
      message.append(banner("error", "repository URL is required"));
      return;
    }
    try {
      await api.startAnalysis(url.value.trim(), branch.value.trim() || null);
      url.value = "";
      branch.value = "";
      poller?.kick();
    } catch (error) {
      message.append(
        banner("error", error instanceof Error ? error.message : String(error)),
      );
    }
  };

  app().replaceChildren(
    el(
      "div",
      { class: "card" },
      el("h1", {}, "Analyze a repository"),
      el(
        "div",
        { class: "row form" },
        el("label", { class: "grow" }, "Repository URL", url),
        el("label", {}, "Branch", branch),
        button("Start Analysis", () => void start()),
      ),
      message,
    ),
    el(
      "div",
      { class: "card" },
      el("h2", {}, "Your analyses"),
      tableHost,
    ),
    el(
      "div",
      { class: "row footer" },
      el("span", {}, `signed in as ${session.username}`),
      button("Sign out", () => {
        sessionStorage.removeItem("repoknowledge-session");
        session = null;
        location.hash = "#/login";
      }, "secondary"),
    ),
  );
  poller.start();
  void refresh();
}

function renderJobTable(host: HTMLElement, jobs: Parameters<typeof toJobRows>[0]): void {
  const rows = toJobRows(jobs);
  if (rows.length === 0) {
    host.replaceChildren(el("p", { class: "dim" }, "No analyses yet."));
    return;
  }
  const table = el(
    "table",
    {},
    el(
      "thead",
      {},
      el(
        "tr",
        {},
        el("th", {}, "Repository"),
        el("th", {}, "Branch"),
        el("th", {}, "Started"),
        el("th", {}, "Stage"),
        el("th", {}, ""),
      ),
    ),
  );
  const body = el("tbody");
  for (const row of rows) {
    const stageCell = el(
      "td",
      { class: row.failed ? "failed" : "" },
      row.failed && row.error ? `${row.stage}: ${row.error}` : row.stage,
    );
    const actionCell = el("td");
    if (row.detailsEnabled && row.resultId) {
      const details = button("Details", () => {
        location.hash = `#/result/${row.resultId}`;
      });
      actionCell.append(details);
    }
    body.append(
      el(
        "tr",
        {},
        el("td", { class: "mono" }, row.url),
        el("td", {}, row.branch),
        el("td", {}, row.startedAt),
        stageCell,
        actionCell,
      ),
    );
  }
  table.append(body);
  host.replaceChildren(table);
}

// ---- detail page ---------------------------------------------------------------

async function renderDetail(resultId: string): Promise<void> {
  if (!session) {
    location.hash = "#/login";
    return;
  }
  poller?.stop();
  app().replaceChildren(el("p", { class: "dim" }, "Loading analysis..."));
  let document_: ReportDocument;
  try {
    document_ = await api.getResult(resultId);
  } catch (error) {
    const status = error instanceof ApiError ? error.status : 0;
    app().replaceChildren(
      el(
        "div",
        { class: "card" },
        banner(
          "error",
          status === 404
            ? "analysis not found"
            : error instanceof Error
              ? error.message
              : String(error),
        ),
        button("Back", () => {
          location.hash = "#/home";
        }, "secondary"),
      ),
    );
    return;
  }

  const labels = summaryLabels(document_);
  const tree = new TreeView(document_.tree);
  const treeHost = el("div", { class: "tree" });
  const modalHost = el("div");
  let selected: ReportNode | null = null;
  const detailsButton = button("See Details", () => {
    if (selected) renderModal(modalHost, selected);
  });
  detailsButton.disabled = true;

  const paint = () => {
    const rows = tree.visibleRows();
    treeHost.replaceChildren(
      ...rows.map((row) => {
        const toggle = row.expandable
          ? button(row.expanded ? "▾" : "▸", () => {
              tree.toggle(row.path);
              paint();
            }, "toggle")
          : el("span", { class: "toggle-placeholder" }, "·");
        const label = el(
          "span",
          {
            class: `tf-label${selected === row.node ? " selected" : ""}`,
            style: `background:${row.shade};color:${row.textColor}`,
          },
          nodeLabel(row.node),
        );
        label.addEventListener("click", () => {
          selected = row.node;
          detailsButton.disabled = false;
          paint();
        });
        return el(
          "div",
          { class: "tree-row", style: `padding-left:${row.depth * 22}px` },
          toggle,
          label,
        );
      }),
    );
  };

  app().replaceChildren(
    el(
      "div",
      { class: "card" },
      el("h1", {}, "Analysis details"),
      el(
        "dl",
        { class: "summary" },
        dt("Repository", labels.url),
        dt("Branch", labels.branch),
        dt("Analyzed version", labels.headCommit),
        dt("Version date", labels.analyzedAt),
        dt("Developers", labels.developers),
        dt("Commits", labels.commits),
        dt("Files", labels.files),
        dt("Project Truck Factor", labels.truckFactor),
      ),
    ),
    el(
      "div",
      { class: "card" },
      el("div", { class: "row spread" }, el("h2", {}, "Knowledge tree"), detailsButton),
      treeHost,
    ),
    modalHost,
    el(
      "div",
      { class: "card" },
      el("h2", {}, "All developers"),
      developerList(document_),
    ),
    el(
      "div",
      { class: "row footer" },
      button("Back to analyses", () => {
        location.hash = "#/home";
      }, "secondary"),
    ),
  );
  paint();
}

function dt(term: string, value: string): DocumentFragment {
  const fragment = document.createDocumentFragment();
  fragment.append(el("dt", {}, term), el("dd", { class: "mono" }, value));
  return fragment;
}

function developerList(document_: ReportDocument): HTMLElement {
  const table = el(
    "table",
    {},
    el(
      "thead",
      {},
      el(
        "tr",
        {},
        el("th", {}, "Name"),
        el("th", {}, "Email"),
        el("th", {}, "Status"),
      ),
    ),
  );
  const body = el("tbody");
  for (const dev of document_.developers) {
    body.append(
      el(
        "tr",
        {},
        el("td", {}, dev.name),
        el("td", { class: "mono" }, dev.email),
        el("td", {}, badge(dev.active)),
      ),
    );
  }
  table.append(body);
  return table;
}

function badge(active: boolean): HTMLElement {
  return el(
    "span",
    { class: active ? "badge active" : "badge inactive" },
    active ? "active" : "inactive",
  );
}

function renderModal(host: HTMLElement, node: ReportNode): void {
  const devs = developerRows(node);
  const files = fileRows(node);

  const devBody = el("tbody");
  for (const dev of devs) {
    const fileCell = el("td", {}, String(dev.authoredFileCount), " ");
    const row = el(
      "tr",
      {},
      el("td", {}, dev.name),
      el("td", { class: "mono" }, dev.email),
      el("td", {}, badge(dev.activeLabel === "active")),
      fileCell,
    );
    const expansion = el(
      "tr",
      { class: "expansion hidden" },
      el(
        "td",
        { colspan: "4" },
        el("ul", {}, ...dev.authoredFiles.map((path) => el("li", { class: "mono" }, path))),
      ),
    );
    fileCell.append(
      button("Authored files", () => expansion.classList.toggle("hidden"), "secondary"),
    );
    devBody.append(row, expansion);
  }

  const fileBody = el("tbody");
  for (const file of files) {
    fileBody.append(
      el(
        "tr",
        {},
        el("td", { class: "mono" }, file.path),
        el("td", {}, file.importance),
        el("td", {}, String(file.activeAuthors)),
      ),
    );
  }

  host.replaceChildren(
    el(
      "div",
      { class: "card modal" },
      el("h2", {}, `Truck Factor details: ${node.name} [TF=${node.truckFactor.value}]`),
      el("h3", {}, "Truck Factor developers"),
      el(
        "table",
        {},
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "Name"),
            el("th", {}, "Email"),
            el("th", {}, "Active"),
            el("th", {}, "Authored files"),
          ),
        ),
        devBody,
      ),
      el("h3", {}, "Files and importance"),
      el(
        "table",
        {},
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "File"),
            el("th", {}, "Importance"),
            el("th", {}, "Active authors"),
          ),
        ),
        fileBody,
      ),
      button("Close", () => host.replaceChildren(), "secondary"),
    ),
  );
}

// ---- router ----------------------------------------------------------------------

function route(): void {
  const hash = location.hash || "#/login";
  if (hash.startsWith("#/result/")) {
    void renderDetail(decodeURIComponent(hash.slice("#/result/".length)));
  } else if (hash === "#/home" && session) {
    renderHome();
  } else {
    renderLogin();
  }
}

restoreSession();
window.addEventListener("hashchange", route);
route();
