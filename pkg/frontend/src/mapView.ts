import type { GeofenceBounds, LatLon } from './types';
import type { Viewport } from './viewState';

export interface CanvasSize {
  width: number;
  height: number;
}

export interface Pixel {
  x: number;
  y: number;
}

// Equirectangular projection: adequate for the regional viewports this COP
// works at, and exactly invertible, which keeps draw-a-box math honest.

export function toPixel(p: LatLon, vp: Viewport, size: CanvasSize): Pixel {
  const x = ((p.lon - vp.minLon) / (vp.maxLon - vp.minLon)) * size.width;
  const y = ((vp.maxLat - p.lat) / (vp.maxLat - vp.minLat)) * size.height;
  return { x, y };
}

export function toLatLon(px: Pixel, vp: Viewport, size: CanvasSize): LatLon {
  const lon = vp.minLon + (px.x / size.width) * (vp.maxLon - vp.minLon);
  const lat = vp.maxLat - (px.y / size.height) * (vp.maxLat - vp.minLat);
  return { lat, lon };
}

export interface BoxDraft {
  start: Pixel;
  end: Pixel;
}

export type BoxResult =
  | { ok: true; bounds: Omit<GeofenceBounds, 'id'> }
  | { ok: false; error: string };

/**
 * Convert a dragged rectangle to fence bounds. A degenerate drag is an
 * inline error and must never reach the API.
 */
export function draftToBounds(draft: BoxDraft, vp: Viewport, size: CanvasSize): BoxResult {
  const a = toLatLon(draft.start, vp, size);
  const b = toLatLon(draft.end, vp, size);
  const bounds = {
    min_lat: Math.min(a.lat, b.lat),
    max_lat: Math.max(a.lat, b.lat),
    min_lon: Math.min(a.lon, b.lon),
    max_lon: Math.max(a.lon, b.lon),
  };
  if (bounds.min_lat === bounds.max_lat || bounds.min_lon === bounds.max_lon) {
    return { ok: false, error: 'geofence box has zero area' };
  }
  return { ok: true, bounds };
}

export function viewportContains(vp: Viewport, p: LatLon): boolean {
  return p.lat >= vp.minLat && p.lat <= vp.maxLat && p.lon >= vp.minLon && p.lon <= vp.maxLon;
}

const VERIFICATION_STYLE: Record<string, string> = {
  Unverified: 'gray',
  CuePending: 'amber',
  Verified: 'green',
  Flagged: 'red',
};

export function trackMarkerStyle(verificationState: string, held: boolean): {
  color: string;
  dashed: boolean;
} {
  return {
    color: VERIFICATION_STYLE[verificationState] ?? 'gray',
    dashed: held, // dead-reckoned-past-horizon positions render hollow
  };
}
