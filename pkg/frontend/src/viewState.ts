import type {
  CueView,
  DetectionView,
  EventRecord,
  GeofenceBounds,
  TrackView,
} from './types';

export interface Viewport {
  minLat: number;
  maxLat: number;
  minLon: number;
  maxLon: number;
  zoom: number;
}

export type Selection =
  | { kind: 'track'; mmsi: number }
  | { kind: 'detection'; detectionId: string }
  | { kind: 'event'; seq: number };

export interface DetectionFilter {
  visible: boolean;
  count: number;
}

/**
 * Client-side mirror of the picture: the seq-ordered event log plus the
 * latest REST snapshots, with purely local view preferences on top.
 * Applying the same event prefix always produces the same state.
 */
export class ViewState {
  activeSources = new Set<string>();
  detectionFilters = new Map<string, DetectionFilter>();
  eventLogCursor = 0;
  selected: Selection | null = null;
  viewport: Viewport = { minLat: -1, maxLat: 1, minLon: -1, maxLon: 1, zoom: 1 };

  events: EventRecord[] = [];
  acknowledged = new Set<number>();
  tracks = new Map<number, TrackView>();
  detections = new Map<string, DetectionView>();
  geofences = new Map<string, GeofenceBounds>();
  cues = new Map<string, CueView>();
  stale = false;

  /** Append one stream record; rejects anything out of seq order. */
  applyEvent(record: EventRecord): void {
    if (record.seq !== this.eventLogCursor + 1) {
      throw new Error(
        `event out of order: cursor ${this.eventLogCursor}, got seq ${record.seq}`,
      );
    }
    this.eventLogCursor = record.seq;
    this.events.push(record);
    this.activeSources.add(record.event.source);
  }

  applyTracks(tracks: TrackView[]): void {
    this.tracks = new Map(tracks.map((t) => [t.mmsi, t]));
  }

  applyDetections(detections: DetectionView[]): void {
    this.detections = new Map(detections.map((d) => [d.detection_id, d]));
    const counts = new Map<string, number>();
    for (const d of detections) {
      counts.set(d.class_label, (counts.get(d.class_label) ?? 0) + 1);
    }
    for (const [label, count] of counts) {
      const prior = this.detectionFilters.get(label);
      this.detectionFilters.set(label, { visible: prior?.visible ?? true, count });
    }
    for (const [label, f] of this.detectionFilters) {
      if (!counts.has(label)) this.detectionFilters.set(label, { ...f, count: 0 });
    }
  }

  applyGeofences(fences: GeofenceBounds[]): void {
    this.geofences = new Map(fences.map((f) => [f.id, f]));
  }

  applyCues(cues: CueView[]): void {
    this.cues = new Map(cues.map((c) => [c.cue_id, c]));
  }

  /** Per-class visibility toggle; counts always reflect the server. */
  toggleDetectionClass(label: string): void {
    const f = this.detectionFilters.get(label);
    if (f) this.detectionFilters.set(label, { ...f, visible: !f.visible });
  }

  visibleDetections(): DetectionView[] {
    return [...this.detections.values()].filter(
      (d) => this.detectionFilters.get(d.class_label)?.visible !== false,
    );
  }

  acknowledge(seq: number): void {
    if (seq <= this.eventLogCursor) this.acknowledged.add(seq);
  }

  select(sel: Selection | null): void {
    this.selected = sel;
  }
}

/** Optimistic geofence add: apply locally, roll back if the POST fails. */
export async function submitGeofence(
  state: ViewState,
  fence: GeofenceBounds,
  post: (f: GeofenceBounds) => Promise<GeofenceBounds>,
): Promise<{ ok: boolean; error?: string }> {
  state.geofences.set(fence.id, fence);
  try {
    await post(fence);
    return { ok: true };
  } catch (err) {
    state.geofences.delete(fence.id);
    return { ok: false, error: err instanceof Error ? err.message : String(err) };
  }
}
