// SVG rendering of the service's graph export. One <g class="node"> per
// exported node, one <path class="edge"> per (antecedent, effect) link.
// The antecedents of a conjunctive rule funnel through a shared junction
// dot so AND bundles read differently from parallel alternative rules.

import type { GraphExportDoc, NodeKind } from './types';

const SVG_NS = 'http://www.w3.org/2000/svg';
const COLUMN_WIDTH = 190;
const ROW_HEIGHT = 64;
const MARGIN = 40;
const NODE_RADIUS = 9;

interface Placed {
  label: string;
  kind: NodeKind;
  x: number;
  y: number;
}

/** Longest-path depth per node; function nodes sit at depth 0. */
export function nodeDepths(graph: GraphExportDoc): Map<string, number> {
  const depths = new Map<string, number>();
  for (const node of graph.nodes) {
    if (node.kind === 'function') depths.set(node.label, 0);
  }
  // relax until stable; the export is acyclic so this terminates
  let changed = true;
  while (changed) {
    changed = false;
    for (const group of graph.rule_groups) {
      const known = group.antecedents.map((a) => depths.get(a));
      if (known.some((d) => d === undefined)) continue;
      const candidate = Math.max(...(known as number[])) + 1;
      const current = depths.get(group.effect);
      if (current === undefined || candidate > current) {
        depths.set(group.effect, candidate);
        changed = true;
      }
    }
  }
  // disconnected declared nodes still need a column
  for (const node of graph.nodes) {
    if (!depths.has(node.label)) depths.set(node.label, 0);
  }
  return depths;
}

function placeNodes(graph: GraphExportDoc): Map<string, Placed> {
  const depths = nodeDepths(graph);
  const byColumn = new Map<number, string[]>();
  for (const node of graph.nodes) {
    const depth = depths.get(node.label)!;
    const column = byColumn.get(depth) ?? [];
    column.push(node.label);
    byColumn.set(depth, column);
  }
  const placed = new Map<string, Placed>();
  for (const node of graph.nodes) {
    const depth = depths.get(node.label)!;
    const column = byColumn.get(depth)!;
    const row = column.indexOf(node.label);
    placed.set(node.label, {
      label: node.label,
      kind: node.kind,
      x: MARGIN + depth * COLUMN_WIDTH,
      y: MARGIN + row * ROW_HEIGHT,
    });
  }
  return placed;
}

export function renderGraph(container: HTMLElement, graph: GraphExportDoc): SVGSVGElement {
  const placed = placeNodes(graph);
  const maxX = Math.max(...[...placed.values()].map((p) => p.x));
  const maxY = Math.max(...[...placed.values()].map((p) => p.y));
  const width = maxX + MARGIN + 120;
  const height = maxY + MARGIN;

  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('width', String(width));
  svg.setAttribute('height', String(height));
  svg.setAttribute('role', 'img');
  svg.setAttribute('aria-label', `causal graph for goal ${graph.goal}`);

  for (const group of graph.rule_groups) {
    const effect = placed.get(group.effect)!;
    const sources = group.antecedents.map((a) => placed.get(a)!);
    const centroidY = sources.reduce((sum, p) => sum + p.y, 0) / sources.length;
    // junction sits just short of the effect so fan lines visibly merge
    const junctionX = effect.x - 34;
    const junctionY = (centroidY + effect.y) / 2;

    for (const source of sources) {
      const path = document.createElementNS(SVG_NS, 'path');
      path.setAttribute('class', 'edge');
      path.setAttribute(
        'd',
        `M ${source.x} ${source.y} L ${junctionX} ${junctionY} L ${effect.x} ${effect.y}`,
      );
      path.setAttribute('data-effect', group.effect);
      svg.appendChild(path);
    }
    if (group.antecedents.length > 1) {
      const dot = document.createElementNS(SVG_NS, 'circle');
      dot.setAttribute('class', 'and-junction');
      dot.setAttribute('cx', String(junctionX));
      dot.setAttribute('cy', String(junctionY));
      dot.setAttribute('r', '3.5');
      svg.appendChild(dot);
    }
  }

  for (const p of placed.values()) {
    const g = document.createElementNS(SVG_NS, 'g');
    g.setAttribute('class', `node node-${p.kind}`);
    g.setAttribute('data-label', p.label);
    const circle = document.createElementNS(SVG_NS, 'circle');
    circle.setAttribute('cx', String(p.x));
    circle.setAttribute('cy', String(p.y));
    circle.setAttribute('r', String(NODE_RADIUS));
    const text = document.createElementNS(SVG_NS, 'text');
    text.setAttribute('x', String(p.x));
    text.setAttribute('y', String(p.y - NODE_RADIUS - 5));
    text.setAttribute('text-anchor', 'middle');
    text.textContent = p.label;
    g.appendChild(circle);
    g.appendChild(text);
    svg.appendChild(g);
  }

  container.innerHTML = '';
  container.appendChild(svg);
  return svg;
}

export function renderedNodeCount(container: HTMLElement): number {
  return container.querySelectorAll('.node').length;
}

export function renderedEdgeCount(container: HTMLElement): number {
  return container.querySelectorAll('.edge').length;
}
