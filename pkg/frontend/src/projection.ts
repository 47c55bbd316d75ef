/** Maps geographic coordinates into a padded SVG viewport (y grows downward). */

import type { LatLngPair } from "./api.js";

export interface Viewport {
  width: number;
  height: number;
  padding: number;
}

export class Projection {
  private readonly minLat: number;
  private readonly minLng: number;
  private readonly latSpan: number;
  private readonly lngSpan: number;

  constructor(
    bounds: [LatLngPair, LatLngPair],
    readonly viewport: Viewport,
  ) {
    this.minLat = bounds[0][0];
    this.minLng = bounds[0][1];
    // Guard against a degenerate (single-point) network.
    this.latSpan = Math.max(bounds[1][0] - bounds[0][0], 1e-9);
    this.lngSpan = Math.max(bounds[1][1] - bounds[0][1], 1e-9);
  }

  toXY(point: LatLngPair): [number, number] {
    const { width, height, padding } = this.viewport;
    const x = padding + ((point[1] - this.minLng) / this.lngSpan) * (width - 2 * padding);
    const y =
      height - padding - ((point[0] - this.minLat) / this.latSpan) * (height - 2 * padding);
    return [x, y];
  }

  /** Inverse of toXY, for converting map clicks back to coordinates. */
  toLatLng(x: number, y: number): LatLngPair {
    const { width, height, padding } = this.viewport;
    const lng = this.minLng + ((x - padding) / (width - 2 * padding)) * this.lngSpan;
    const lat = this.minLat + ((height - padding - y) / (height - 2 * padding)) * this.latSpan;
    return [lat, lng];
  }
}
