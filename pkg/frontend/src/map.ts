/**
 * SVG map layer: network polylines, start/intention markers, observation
 * trail and per-candidate ideal-route overlays. No tile provider; the whole
 * map is drawn from the service's network geometry.
 */

import type { LatLngPair, NetworkInfo } from "./api.js";
import { Projection } from "./projection.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const ROUTE_COLORS = [
  "#d62728",
  "#1f77b4",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#e377c2",
  "#17becf",
];

export function routeStyle(index: number): { color: string; dash: string } {
  const color = ROUTE_COLORS[index % ROUTE_COLORS.length]!;
  const dash = index % 2 === 0 ? "" : "6,4";
  return { color, dash };
}

export class MapLayer {
  private projection: Projection | null = null;
  private readonly layers: Record<string, SVGGElement> = {};

  constructor(private readonly svg: SVGSVGElement) {
    for (const name of ["network", "routes", "trail", "markers"]) {
      const group = svg.ownerDocument.createElementNS(SVG_NS, "g");
      group.dataset.layer = name;
      svg.appendChild(group);
      this.layers[name] = group;
    }
  }

  get doc(): Document {
    return this.svg.ownerDocument;
  }

  project(): Projection {
    if (!this.projection) throw new Error("no network rendered yet");
    return this.projection;
  }

  renderNetwork(network: NetworkInfo, width = 800, height = 600): void {
    this.projection = new Projection(network.bounds, { width, height, padding: 20 });
    this.svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    const group = this.layers["network"]!;
    group.innerHTML = "";
    for (const [fromId, toId] of network.edges) {
      const a = network.nodes[fromId];
      const b = network.nodes[toId];
      if (!a || !b) continue;
      const [x1, y1] = this.projection.toXY(a);
      const [x2, y2] = this.projection.toXY(b);
      const line = this.doc.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(x1));
      line.setAttribute("y1", String(y1));
      line.setAttribute("x2", String(x2));
      line.setAttribute("y2", String(y2));
      line.setAttribute("class", "road");
      group.appendChild(line);
    }
  }

  private marker(point: LatLngPair, cls: string, label?: string): SVGGElement {
    const [x, y] = this.project().toXY(point);
    const group = this.doc.createElementNS(SVG_NS, "g");
    group.setAttribute("class", cls);
    const dot = this.doc.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(x));
    dot.setAttribute("cy", String(y));
    dot.setAttribute("r", "6");
    group.appendChild(dot);
    if (label) {
      const text = this.doc.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(x + 8));
      text.setAttribute("y", String(y - 8));
      text.textContent = label;
      group.appendChild(text);
    }
    return group;
  }

  renderScenario(init: LatLngPair | null, intentions: { label: string; point: LatLngPair }[]): void {
    const group = this.layers["markers"]!;
    group.innerHTML = "";
    if (init) group.appendChild(this.marker(init, "marker-init", "start"));
    intentions.forEach((intention, index) => {
      const marker = this.marker(intention.point, "marker-intention", intention.label);
      marker.querySelector("circle")?.setAttribute("fill", routeStyle(index).color);
      group.appendChild(marker);
    });
  }

  renderIdealRoutes(routes: Record<string, LatLngPair[]>, highlight: string[] = []): void {
    const group = this.layers["routes"]!;
    group.innerHTML = "";
    Object.entries(routes).forEach(([label, points], index) => {
      const { color, dash } = routeStyle(index);
      const polyline = this.doc.createElementNS(SVG_NS, "polyline");
      polyline.setAttribute(
        "points",
        points.map((p) => this.project().toXY(p).join(",")).join(" "),
      );
      polyline.setAttribute("class", highlight.includes(label) ? "ideal argmax" : "ideal");
      polyline.setAttribute("stroke", color);
      if (dash) polyline.setAttribute("stroke-dasharray", dash);
      polyline.setAttribute("fill", "none");
      polyline.dataset.routeLabel = label;
      group.appendChild(polyline);
    });
  }

  renderTrail(trail: LatLngPair[]): void {
    const group = this.layers["trail"]!;
    group.innerHTML = "";
    if (trail.length > 1) {
      const polyline = this.doc.createElementNS(SVG_NS, "polyline");
      polyline.setAttribute(
        "points",
        trail.map((p) => this.project().toXY(p).join(",")).join(" "),
      );
      polyline.setAttribute("class", "trail-line");
      polyline.setAttribute("fill", "none");
      group.appendChild(polyline);
    }
    trail.forEach((point, index) => {
      const marker = this.marker(point, "marker-observation", String(index + 1));
      marker.querySelector("circle")?.setAttribute("r", "4");
      group.appendChild(marker);
    });
  }
}
