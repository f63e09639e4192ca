/**
 * Graph model and a small force-directed layout.
 *
 * The model mirrors the server's `graph` messages exactly -- ids, display
 * strings, asserted/hypothesis flags, argument-position edges -- and only
 * adds screen coordinates. Layout is presentation; it carries no meaning.
 */

import { GraphEdge, GraphMessage, GraphNode } from "./protocol.js";

export interface LayoutNode extends GraphNode {
  x: number;
  y: number;
  /** has outgoing argument edges, i.e. a structured proposition */
  compound: boolean;
}

/** Deterministic pseudo-random stream so layouts are reproducible. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a += 0x6d2b79f5;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class GraphModel {
  nodes = new Map<number, LayoutNode>();
  edges: GraphEdge[] = [];

  /** Replace contents with a fresh server snapshot, keeping any existing
   * node positions so the picture stays stable across commands. */
  apply(message: GraphMessage): void {
    const rand = mulberry32(97);
    const incoming = new Set<number>();
    const compound = new Set<number>();
    for (const edge of message.edges) compound.add(edge.from);
    for (const node of message.nodes) {
      incoming.add(node.id);
      const existing = this.nodes.get(node.id);
      this.nodes.set(node.id, {
        ...node,
        compound: compound.has(node.id),
        x: existing ? existing.x : rand() * 2 - 1 + node.id * 1e-3,
        y: existing ? existing.y : rand() * 2 - 1 - node.id * 1e-3,
      });
    }
    for (const id of [...this.nodes.keys()]) {
      if (!incoming.has(id)) this.nodes.delete(id);
    }
    this.edges = [...message.edges];
  }

  node(id: number): LayoutNode | undefined {
    return this.nodes.get(id);
  }

  byDisplay(display: string): LayoutNode | undefined {
    for (const node of this.nodes.values()) {
      if (node.display === display) return node;
    }
    return undefined;
  }

  /** Spring embedding: repulsion between all pairs, attraction along edges,
   * mild centering. Desk-scale graphs, so the quadratic pass is fine. */
  layout(iterations = 150): void {
    const nodes = [...this.nodes.values()];
    if (nodes.length <= 1) return;
    const k = Math.sqrt(4.0 / nodes.length);
    for (let step = 0; step < iterations; step++) {
      const cool = 0.08 * (1 - step / iterations) + 0.005;
      const fx = new Map<number, number>();
      const fy = new Map<number, number>();
      for (const n of nodes) {
        fx.set(n.id, -n.x * 0.05);
        fy.set(n.id, -n.y * 0.05);
      }
      for (let i = 0; i < nodes.length; i++) {
        for (let j = i + 1; j < nodes.length; j++) {
          const a = nodes[i];
          const b = nodes[j];
          let dx = a.x - b.x;
          let dy = a.y - b.y;
          let d2 = dx * dx + dy * dy;
          if (d2 < 1e-6) {
            dx = 1e-3 * (i - j);
            dy = 1e-3;
            d2 = dx * dx + dy * dy;
          }
          const push = (k * k) / d2;
          fx.set(a.id, fx.get(a.id)! + dx * push);
          fy.set(a.id, fy.get(a.id)! + dy * push);
          fx.set(b.id, fx.get(b.id)! - dx * push);
          fy.set(b.id, fy.get(b.id)! - dy * push);
        }
      }
      for (const edge of this.edges) {
        const a = this.nodes.get(edge.from);
        const b = this.nodes.get(edge.to);
        if (!a || !b) continue;
        const dx = b.x - a.x;
        const dy = b.y - a.y;
        const d = Math.sqrt(dx * dx + dy * dy) + 1e-9;
        const pull = (d - k) * 0.5;
        fx.set(a.id, fx.get(a.id)! + (dx / d) * pull);
        fy.set(a.id, fy.get(a.id)! + (dy / d) * pull);
        fx.set(b.id, fx.get(b.id)! - (dx / d) * pull);
        fy.set(b.id, fy.get(b.id)! - (dy / d) * pull);
      }
      for (const n of nodes) {
        n.x += Math.max(-0.1, Math.min(0.1, fx.get(n.id)! * cool));
        n.y += Math.max(-0.1, Math.min(0.1, fy.get(n.id)! * cool));
      }
    }
  }

  bounds(): { minX: number; minY: number; maxX: number; maxY: number } {
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (const n of this.nodes.values()) {
      minX = Math.min(minX, n.x);
      minY = Math.min(minY, n.y);
      maxX = Math.max(maxX, n.x);
      maxY = Math.max(maxY, n.y);
    }
    if (!isFinite(minX)) return { minX: -1, minY: -1, maxX: 1, maxY: 1 };
    return { minX, minY, maxX, maxY };
  }
}
