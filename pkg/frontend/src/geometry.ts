/** Doubled-coordinate board geometry.
 *
 * All positions reuse the service's edge ids directly: an edge is its
 * midpoint [u, v] on the doubled lattice, vertices sit at even-even
 * points, and no conversion layer exists between game math and pixels.
 */

import type { Edge } from "./types.js";

/** Pixels per half lattice step. */
export const HALF = 24;

export function edgeKey(e: Edge): string {
  return `${e[0]},${e[1]}`;
}

export function parseKey(key: string): Edge {
  const [u, v] = key.split(",").map(Number);
  return [u, v];
}

export function horizontalEdge(x: number, y: number): Edge {
  return [2 * x + 1, 2 * y];
}

export function verticalEdge(x: number, y: number): Edge {
  return [2 * x, 2 * y + 1];
}

export function isHorizontal(e: Edge): boolean {
  return e[0] % 2 !== 0;
}

/** The two even-even endpoints of an edge. */
export function endpoints(e: Edge): [Edge, Edge] {
  const [u, v] = e;
  return isHorizontal(e)
    ? [
        [u - 1, v],
        [u + 1, v],
      ]
    : [
        [u, v - 1],
        [u, v + 1],
      ];
}

/** The dual segment: same midpoint, perpendicular orientation. */
export function dualEndpoints(e: Edge): [Edge, Edge] {
  const [u, v] = e;
  return isHorizontal(e)
    ? [
        [u, v - 1],
        [u, v + 1],
      ]
    : [
        [u - 1, v],
        [u + 1, v],
      ];
}

/** Every edge of S_{m x n}: the side vertical columns are removed. */
export function boardEdges(m: number, n: number): Edge[] {
  const edges: Edge[] = [];
  for (let x = 1; x <= m - 1; x += 1) {
    for (let y = 1; y <= n; y += 1) {
      edges.push(horizontalEdge(x, y));
    }
  }
  for (let x = 2; x <= m - 1; x += 1) {
    for (let y = 1; y <= n - 1; y += 1) {
      edges.push(verticalEdge(x, y));
    }
  }
  return edges;
}

export function px(u: number): number {
  return u * HALF;
}

/** Screen y grows downward; lattice v grows upward. */
export function py(v: number, n: number): number {
  return (2 * n + 2 - v) * HALF;
}

export function boardWidth(m: number): number {
  return (2 * m + 2) * HALF;
}

export function boardHeight(n: number): number {
  return (2 * n + 4) * HALF;
}
