import { describe, expect, it } from 'vitest';
import { ApiClient, ApiError } from '../src/api';

interface Captured {
  url: string;
  method: string;
  body: unknown;
}

function mockFetch(status: number, payload: unknown, log: Captured[]): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    log.push({
      url: String(input),
      method: init?.method ?? 'GET',
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    return new Response(JSON.stringify(payload), {
      status,
      headers: { 'content-type': 'application/json' },
    });
  }) as typeof fetch;
}

describe('ApiClient', () => {
  it('fetches tracks from /tracks', async () => {
    const log: Captured[] = [];
    const api = new ApiClient('http://cop', mockFetch(200, { as_of: 5, tracks: [] }, log));
    const body = await api.getTracks();
    expect(log[0].url).toBe('http://cop/tracks');
    expect(body.as_of).toBe(5);
  });

  it('encodes event query params', async () => {
    const log: Captured[] = [];
    const api = new ApiClient('http://cop/', mockFetch(200, { events: [] }, log));
    await api.getEvents({ kind: 'DarkVessel', since_seq: 40, limit: 10 });
    const url = new URL(log[0].url);
    expect(url.pathname).toBe('/events');
    expect(url.searchParams.get('kind')).toBe('DarkVessel');
    expect(url.searchParams.get('since_seq')).toBe('40');
    expect(url.searchParams.get('limit')).toBe('10');
  });

  it('posts geofence bounds exactly as drawn', async () => {
    const fence = { id: 'box', min_lat: 1.25, max_lat: 2.5, min_lon: -3.125, max_lon: 0.75 };
    const log: Captured[] = [];
    const api = new ApiClient('http://cop', mockFetch(200, fence, log));
    await api.postGeofence(fence);
    expect(log[0].method).toBe('POST');
    expect(log[0].url).toBe('http://cop/geofences');
    expect(log[0].body).toEqual(fence); // bounds must not be rounded or reordered
  });

  it('deletes a geofence by escaped id', async () => {
    const log: Captured[] = [];
    const api = new ApiClient('http://cop', mockFetch(200, {}, log));
    await api.deleteGeofence('zone a');
    expect(log[0]).toMatchObject({ url: 'http://cop/geofences/zone%20a', method: 'DELETE' });
  });

  it('posts manual cue requests', async () => {
    const log: Captured[] = [];
    const api = new ApiClient('http://cop', mockFetch(200, {}, log));
    await api.postCue(215001000, 600, 'operator request');
    expect(log[0].body).toEqual({ mmsi: 215001000, t: 600, reason: 'operator request' });
  });

  it('builds similarity queries by id or by raw vector', async () => {
    const log: Captured[] = [];
    const api = new ApiClient('http://cop', mockFetch(200, { results: [] }, log));
    await api.searchSimilar({ feature_id: 'f-1' }, 5);
    await api.searchSimilar({ values: [0.1, 0.2] });
    expect(log[0].body).toEqual({ feature_id: 'f-1', k: 5 });
    expect(log[1].body).toEqual({ values: [0.1, 0.2], k: 10 });
  });

  it('passes projection seed and k through', async () => {
    const log: Captured[] = [];
    const api = new ApiClient('http://cop', mockFetch(200, { projection: [] }, log));
    await api.getProjection({ seed: 7, k: 12 });
    const url = new URL(log[0].url);
    expect(url.searchParams.get('seed')).toBe('7');
    expect(url.searchParams.get('k')).toBe('12');
  });

  it('raises ApiError with the server detail message', async () => {
    const api = new ApiClient('http://cop', mockFetch(404, { detail: 'unknown feature id' }, []));
    await expect(api.searchSimilar({ feature_id: 'nope' })).rejects.toThrow(ApiError);
    await expect(api.searchSimilar({ feature_id: 'nope' })).rejects.toThrow(
      'HTTP 404: unknown feature id',
    );
  });

  it('tolerates non-JSON error bodies', async () => {
    const fetchFn = (async () => new Response('boom', { status: 500, statusText: 'oops' })) as typeof fetch;
    const api = new ApiClient('http://cop', fetchFn);
    await expect(api.getTracks()).rejects.toThrow('HTTP 500');
  });
});
