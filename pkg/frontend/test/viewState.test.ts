import { describe, expect, it } from 'vitest';
import type { DetectionView, GeofenceBounds, TrackView } from '../src/types';
import { ViewState, submitGeofence } from '../src/viewState';
import { makeRecord } from './mockServer';

function det(id: string, label: string): DetectionView {
  return {
    detection_id: id,
    frame_id: 'f-1',
    timestamp: 10,
    class_label: label,
    confidence: 0.9,
    bbox: { x_min: 0, y_min: 0, x_max: 10, y_max: 10 },
    geolocation: { lat: 0, lon: 0 },
    feature_id: null,
  };
}

function track(mmsi: number): TrackView {
  return {
    mmsi,
    last_report: { mmsi, timestamp: 0, lat: 0, lon: 0, sog: 5, cog: 90, heading: 90 },
    predicted: { lat: 0, lon: 0.001 },
    staleness: 30,
    held: false,
    verification_state: 'Unverified',
    presence: 'Active',
    vessel_name: null,
  };
}

const fence: GeofenceBounds = { id: 'box', min_lat: 0, max_lat: 1, min_lon: 0, max_lon: 1 };

describe('ViewState event log', () => {
  it('applies records in seq order and advances the cursor', () => {
    const st = new ViewState();
    st.applyEvent(makeRecord(1));
    st.applyEvent(makeRecord(2, 'Disappearance'));
    expect(st.eventLogCursor).toBe(2);
    expect(st.events.map((r) => r.seq)).toEqual([1, 2]);
    expect(st.activeSources.has('AIS')).toBe(true);
  });

  it('rejects gaps and duplicates', () => {
    const st = new ViewState();
    st.applyEvent(makeRecord(1));
    expect(() => st.applyEvent(makeRecord(3))).toThrow(/out of order/);
    expect(() => st.applyEvent(makeRecord(1))).toThrow(/out of order/);
    expect(st.eventLogCursor).toBe(1);
  });

  it('only acknowledges events that have arrived', () => {
    const st = new ViewState();
    st.applyEvent(makeRecord(1));
    st.acknowledge(1);
    st.acknowledge(5); // not seen yet
    expect(st.acknowledged).toEqual(new Set([1]));
  });
});

describe('ViewState snapshots and filters', () => {
  it('indexes tracks by mmsi', () => {
    const st = new ViewState();
    st.applyTracks([track(215001000), track(215002000)]);
    expect(st.tracks.get(215001000)?.mmsi).toBe(215001000);
    expect(st.tracks.size).toBe(2);
  });

  it('counts detections per class and filters visibility', () => {
    const st = new ViewState();
    st.applyDetections([det('d1', 'vessel'), det('d2', 'vessel'), det('d3', 'person')]);
    expect(st.detectionFilters.get('vessel')).toEqual({ visible: true, count: 2 });
    expect(st.visibleDetections()).toHaveLength(3);

    st.toggleDetectionClass('vessel');
    expect(st.visibleDetections().map((d) => d.detection_id)).toEqual(['d3']);
  });

  it('keeps a hidden class hidden when the snapshot refreshes', () => {
    const st = new ViewState();
    st.applyDetections([det('d1', 'vessel')]);
    st.toggleDetectionClass('vessel');
    st.applyDetections([det('d1', 'vessel'), det('d2', 'vessel')]);
    expect(st.detectionFilters.get('vessel')).toEqual({ visible: false, count: 2 });
    expect(st.visibleDetections()).toHaveLength(0);
  });

  it('zeroes counts for classes absent from the latest snapshot', () => {
    const st = new ViewState();
    st.applyDetections([det('d1', 'person')]);
    st.applyDetections([det('d2', 'vessel')]);
    expect(st.detectionFilters.get('person')?.count).toBe(0);
  });

  it('tracks selection independently of data', () => {
    const st = new ViewState();
    st.select({ kind: 'track', mmsi: 215001000 });
    expect(st.selected).toEqual({ kind: 'track', mmsi: 215001000 });
    st.select(null);
    expect(st.selected).toBeNull();
  });
});

describe('submitGeofence', () => {
  it('shows the fence immediately and keeps it when the POST succeeds', async () => {
    const st = new ViewState();
    let posted: GeofenceBounds | null = null;
    const result = await submitGeofence(st, fence, async (f) => {
      expect(st.geofences.has('box')).toBe(true); // optimistic, visible pre-ack
      posted = f;
      return f;
    });
    expect(result.ok).toBe(true);
    expect(posted).toEqual(fence);
    expect(st.geofences.get('box')).toEqual(fence);
  });

  it('rolls back and reports the error when the POST fails', async () => {
    const st = new ViewState();
    const result = await submitGeofence(st, fence, async () => {
      throw new Error('HTTP 400: overlapping fence');
    });
    expect(result).toEqual({ ok: false, error: 'HTTP 400: overlapping fence' });
    expect(st.geofences.has('box')).toBe(false);
  });
});
