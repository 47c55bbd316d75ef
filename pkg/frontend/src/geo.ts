/**
 * Minimal client-side geodesy: great-circle distance and node snapping.
 *
 * Used only to snap clicks onto the rendered network and size markers; all
 * recognition math happens server-side.
 */

import type { LatLngPair } from "./api.js";

const EARTH_RADIUS_M = 6_371_008.8;

export function haversineMeters(a: LatLngPair, b: LatLngPair): number {
  const toRad = (deg: number) => (deg * Math.PI) / 180;
  const dLat = toRad(Math.abs(b[0] - a[0]));
  let dLngDeg = Math.abs(b[1] - a[1]);
  if (dLngDeg > 180) dLngDeg = 360 - dLngDeg;
  const dLng = toRad(dLngDeg);
  const h =
    Math.sin(dLat / 2) ** 2 +
    Math.cos(toRad(a[0])) * Math.cos(toRad(b[0])) * Math.sin(dLng / 2) ** 2;
  return 2 * EARTH_RADIUS_M * Math.asin(Math.min(1, Math.sqrt(h)));
}

/** Nearest node id by great-circle distance; ties go to the smaller id. */
export function nearestNode(nodes: Record<string, LatLngPair>, point: LatLngPair): string {
  let bestId: string | null = null;
  let bestDist = Infinity;
  for (const id of Object.keys(nodes).sort()) {
    const d = haversineMeters(nodes[id]!, point);
    if (d < bestDist) {
      bestId = id;
      bestDist = d;
    }
  }
  if (bestId === null) throw new Error("network has no nodes");
  return bestId;
}
