/** Expand/collapse view-model over the report tree.
 *
 * Children of a collapsed directory are not materialized into rows, so large
 * trees render lazily. Shades are normalized per sibling set: each row's
 * color scope is exactly the truck factors of the nodes sharing its parent.
 */

import { shadeForTruckFactor, textColorOn } from "./gradient.js";
import type { ReportNode } from "./types.js";

export interface TreeRow {
  node: ReportNode;
  path: string;
  depth: number;
  expandable: boolean;
  expanded: boolean;
  shade: string;
  textColor: string;
}

export class TreeView {
  private expandedPaths = new Set<string>();

  constructor(readonly root: ReportNode) {
    this.expandedPaths.add(this.rootPath());
  }

  rootPath(): string {
    return this.root.name;
  }

  childPath(parentPath: string, child: ReportNode): string {
    return `${parentPath}/${child.name}`;
  }

  isExpanded(path: string): boolean {
    return this.expandedPaths.has(path);
  }

  toggle(path: string): void {
    if (this.expandedPaths.has(path)) this.expandedPaths.delete(path);
    else this.expandedPaths.add(path);
  }

  expandAll(): void {
    const walk = (node: ReportNode, path: string) => {
      if (node.kind === "directory") this.expandedPaths.add(path);
      for (const child of node.children) walk(child, this.childPath(path, child));
    };
    walk(this.root, this.rootPath());
  }

  visibleRows(): TreeRow[] {
    const rows: TreeRow[] = [];
    const pushRow = (
      node: ReportNode,
      path: string,
      depth: number,
      siblingScope: number[],
    ) => {
      const shade = shadeForTruckFactor(node.truckFactor.value, siblingScope);
      const expanded = this.isExpanded(path);
      rows.push({
        node,
        path,
        depth,
        expandable: node.kind === "directory" && node.children.length > 0,
        expanded,
        shade,
        textColor: textColorOn(shade),
      });
      if (node.kind === "directory" && expanded) {
        const childScope = node.children.map((c) => c.truckFactor.value);
        for (const child of node.children) {
          pushRow(child, this.childPath(path, child), depth + 1, childScope);
        }
      }
    };
    pushRow(this.root, this.rootPath(), 0, [this.root.truckFactor.value]);
    return rows;
  }

  /** The node at a row path, or null when the path does not exist. */
  nodeAt(path: string): ReportNode | null {
    const parts = path.split("/");
    if (parts[0] !== this.root.name) return null;
    let node: ReportNode = this.root;
    for (const part of parts.slice(1)) {
      const next = node.children.find((child) => child.name === part);
      if (!next) return null;
      node = next;
    }
    return node;
  }
}
