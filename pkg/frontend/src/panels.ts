import type { EventRecord, ProjectionPoint, SimilarityHit } from './types';

export interface EventLogRow {
  seq: number;
  timestamp: number;
  kind: string;
  description: string;
  location: { lat: number; lon: number } | null;
  frameRef: string | null;
}

// Detection subjects are "frameId:mmsi"; the frame half is the video
// reference an analyst jumps to.
function frameRefOf(subjects: string[]): string | null {
  for (const s of subjects) {
    const idx = s.lastIndexOf(':');
    if (idx > 0) return s.slice(0, idx);
  }
  return null;
}

const DESCRIPTIONS: Record<string, (e: EventRecord['event']) => string> = {
  Appearance: (e) => `vessel ${e.subjects[0]} appeared`,
  Disappearance: (e) => `vessel ${e.subjects[0]} went silent`,
  OffCourse: (e) => `vessel ${e.subjects[0]} deviates from reported course`,
  Colocation: (e) => `vessels ${e.subjects.join(' and ')} within close quarters`,
  GeofenceEnter: (e) => `vessel ${e.subjects[0]} entered ${e.details['fence_id'] ?? 'fence'}`,
  GeofenceExit: (e) => `vessel ${e.subjects[0]} left ${e.details['fence_id'] ?? 'fence'}`,
  GeofenceProjectedEnter: (e) => `vessel ${e.subjects[0]} projected to enter ${e.details['fence_id'] ?? 'fence'}`,
  DarkVessel: (e) => `unbroadcast vessel detected (${e.subjects[0]})`,
  VesselVerified: (e) => `vessel ${e.subjects[0]} visually verified`,
  VesselMismatch: (e) => `verification mismatch for ${e.subjects[0]}: ${e.details['reason'] ?? ''}`,
  Meeting: (e) => `meeting of ${e.subjects.length}`,
  Gathering: (e) => `gathering of ${e.subjects.length}`,
  CountAnomaly: (e) => `count anomaly: ${e.details['class_label']} = ${e.details['count']}`,
};

export function toLogRow(record: EventRecord): EventLogRow {
  const e = record.event;
  const describe = DESCRIPTIONS[e.kind];
  return {
    seq: record.seq,
    timestamp: e.timestamp,
    kind: e.kind,
    description: describe ? describe(e) : `${e.kind}: ${e.subjects.join(', ')}`,
    location: e.location,
    frameRef: frameRefOf(e.subjects),
  };
}

export interface RankedResult {
  rank: number;
  feature_id: string;
  similarity: number;
}

/** Ranked list in exactly the order the API returned. */
export function rankResults(hits: SimilarityHit[]): RankedResult[] {
  return hits.map((h, i) => ({ rank: i + 1, ...h }));
}

export interface ScatterPoint {
  x: number;
  y: number;
  feature_id: string;
  color: string;
}

const CLASS_COLORS = ['steelblue', 'darkorange', 'seagreen', 'crimson', 'purple', 'goldenrod'];

export function projectionScatter(points: ProjectionPoint[]): ScatterPoint[] {
  const palette = new Map<string, string>();
  for (const p of points) {
    const label = p.class_label ?? 'unknown';
    if (!palette.has(label)) {
      palette.set(label, CLASS_COLORS[palette.size % CLASS_COLORS.length]);
    }
  }
  return points.map((p) => ({
    x: p.x,
    y: p.y,
    feature_id: p.feature_id,
    color: palette.get(p.class_label ?? 'unknown')!,
  }));
}
