import type {
  CountBucket,
  CueView,
  DetectionView,
  EventRecord,
  GeofenceBounds,
  ProjectionPoint,
  SimilarityHit,
  TrackView,
} from './types';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = typeof fetch;

/** Thin typed client over the fusion service REST API. */
export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep statusText
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  async getTracks(): Promise<{ as_of: number; tracks: TrackView[] }> {
    return this.request('/tracks');
  }

  async getEvents(params: {
    kind?: string;
    since_seq?: number;
    since_t?: number;
    limit?: number;
  } = {}): Promise<EventRecord[]> {
    const q = new URLSearchParams();
    for (const [k, v] of Object.entries(params)) {
      if (v !== undefined) q.set(k, String(v));
    }
    const qs = q.toString();
    const body = await this.request<{ events: EventRecord[] }>(
      `/events${qs ? '?' + qs : ''}`,
    );
    return body.events;
  }

  async getDetections(params: { since_t?: number; class?: string } = {}): Promise<DetectionView[]> {
    const q = new URLSearchParams();
    if (params.since_t !== undefined) q.set('since_t', String(params.since_t));
    if (params.class !== undefined) q.set('class', params.class);
    const qs = q.toString();
    const body = await this.request<{ detections: DetectionView[] }>(
      `/detections${qs ? '?' + qs : ''}`,
    );
    return body.detections;
  }

  async getGeofences(): Promise<GeofenceBounds[]> {
    const body = await this.request<{ geofences: GeofenceBounds[] }>('/geofences');
    return body.geofences;
  }

  async postGeofence(fence: GeofenceBounds): Promise<GeofenceBounds> {
    return this.post('/geofences', fence);
  }

  async deleteGeofence(id: string): Promise<void> {
    await this.request(`/geofences/${encodeURIComponent(id)}`, { method: 'DELETE' });
  }

  async getCues(): Promise<CueView[]> {
    const body = await this.request<{ cues: CueView[] }>('/cues');
    return body.cues;
  }

  async postCue(mmsi: number, t: number, reason = 'manual'): Promise<CueView> {
    return this.post('/cues', { mmsi, t, reason });
  }

  async searchSimilar(
    query: { feature_id: string } | { values: number[] },
    k = 10,
  ): Promise<SimilarityHit[]> {
    const body = await this.post<{ results: SimilarityHit[] }>('/search/similar', {
      ...query,
      k,
    });
    return body.results;
  }

  async getProjection(params: { seed?: number; k?: number } = {}): Promise<ProjectionPoint[]> {
    const q = new URLSearchParams();
    if (params.seed !== undefined) q.set('seed', String(params.seed));
    if (params.k !== undefined) q.set('k', String(params.k));
    const qs = q.toString();
    const body = await this.request<{ projection: ProjectionPoint[] }>(
      `/projection${qs ? '?' + qs : ''}`,
    );
    return body.projection;
  }

  async getCounts(params: { class?: string; since_t?: number } = {}): Promise<Record<string, CountBucket[]>> {
    const q = new URLSearchParams();
    if (params.class !== undefined) q.set('class', params.class);
    if (params.since_t !== undefined) q.set('since_t', String(params.since_t));
    const qs = q.toString();
    const body = await this.request<{ counts: Record<string, CountBucket[]> }>(
      `/analytics/counts${qs ? '?' + qs : ''}`,
    );
    return body.counts;
  }

  async postReplay(path: string, speed?: number): Promise<{ count: number; events: unknown[] }> {
    return this.post('/replay', { path, speed: speed ?? null });
  }
}
