// Payload shapes of the fusion service HTTP API.

export interface LatLon {
  lat: number;
  lon: number;
}

export interface PositionReport {
  mmsi: number;
  timestamp: number;
  lat: number | null;
  lon: number | null;
  sog: number | null;
  cog: number | null;
  heading: number | null;
}

export type VerificationState = 'Unverified' | 'CuePending' | 'Verified' | 'Flagged';
export type Presence = 'Active' | 'Disappeared';

export interface TrackView {
  mmsi: number;
  last_report: PositionReport;
  predicted: LatLon;
  staleness: number;
  held: boolean;
  verification_state: VerificationState;
  presence: Presence;
  vessel_name: string | null;
}

export interface CopEvent {
  id: number;
  kind: string;
  timestamp: number;
  subjects: string[];
  source: string;
  location: LatLon | null;
  details: Record<string, unknown>;
}

export interface EventRecord {
  seq: number;
  wrote_at: number;
  event: CopEvent;
}

export interface GeofenceBounds {
  id: string;
  min_lat: number;
  max_lat: number;
  min_lon: number;
  max_lon: number;
}

export interface DetectionView {
  detection_id: string;
  frame_id: string;
  timestamp: number;
  class_label: string;
  confidence: number;
  bbox: { x_min: number; y_min: number; x_max: number; y_max: number };
  geolocation: LatLon | null;
  feature_id: string | null;
}

export interface CueView {
  cue_id: string;
  target: LatLon;
  reason: string;
  created_at: number;
  deadline: number;
  subject_mmsi: number;
  state: 'Pending' | 'Active' | 'Completed' | 'Expired';
}

export interface SimilarityHit {
  feature_id: string;
  similarity: number;
}

export interface ProjectionPoint {
  feature_id: string;
  x: number;
  y: number;
  class_label: string | null;
}

export interface CountBucket {
  bucket_start: number;
  count: number;
}
