/** View model for the 29-node risk network: circular layout, degree-scaled
 * node sizes, and a truth-to-data check that locally computed degrees equal
 * the sizes the service reports. */

import type { NetworkEdge, NetworkResponse } from "./types.js";
import type { Category } from "./types.js";

export interface NodeLayout {
  id: number;
  category: Category;
  degree: number;
  x: number;
  y: number;
  radius: number;
}

export interface EdgeLayout {
  a: number;
  b: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  provenance: [number, number][];
}

export interface NetworkView {
  nodes: NodeLayout[];
  edges: EdgeLayout[];
  edgeCount: number;
  /** true iff degrees recomputed from the edge list match the server's */
  degreesConsistent: boolean;
}

export function degreesFromEdges(edges: NetworkEdge[]): Map<number, number> {
  const degrees = new Map<number, number>();
  for (const { a, b } of edges) {
    degrees.set(a, (degrees.get(a) ?? 0) + 1);
    degrees.set(b, (degrees.get(b) ?? 0) + 1);
  }
  return degrees;
}

export function buildNetworkView(doc: NetworkResponse, size = 640): NetworkView {
  const center = size / 2;
  const orbit = size * 0.4;
  const computed = degreesFromEdges(doc.edges);
  const maxDegree = Math.max(1, ...doc.nodes.map((n) => n.degree));

  const positions = new Map<number, { x: number; y: number }>();
  const nodes: NodeLayout[] = doc.nodes.map((node, index) => {
    const angle = (2 * Math.PI * index) / doc.nodes.length - Math.PI / 2;
    const x = center + orbit * Math.cos(angle);
    const y = center + orbit * Math.sin(angle);
    positions.set(node.id, { x, y });
    return {
      id: node.id,
      category: node.category,
      degree: node.degree,
      x,
      y,
      radius: 5 + 12 * (node.degree / maxDegree),
    };
  });

  const edges: EdgeLayout[] = doc.edges.map((edge) => {
    const pa = positions.get(edge.a);
    const pb = positions.get(edge.b);
    if (!pa || !pb) throw new Error(`edge ${edge.a}-${edge.b} references unknown node`);
    return { a: edge.a, b: edge.b, x1: pa.x, y1: pa.y, x2: pb.x, y2: pb.y,
             provenance: edge.provenance };
  });

  const degreesConsistent = doc.nodes.every(
    (node) => (computed.get(node.id) ?? 0) === node.degree,
  );

  return { nodes, edges, edgeCount: doc.edges.length, degreesConsistent };
}
