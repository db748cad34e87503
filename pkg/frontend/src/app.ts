import { ApiClient } from './api';
import { EventStreamClient } from './stream';
import { ViewState } from './viewState';

export interface AppOptions {
  fetchFn?: typeof fetch;
  retryDelayMs?: number;
  /** snapshot refresh hook fired after each applied event */
  onUpdate?: (state: ViewState) => void;
}

/**
 * Wires the stream client into a ViewState and keeps the REST snapshots
 * (tracks, detections, fences, cues) in step with the event cursor.
 */
export class CopApp {
  readonly api: ApiClient;
  readonly state = new ViewState();
  private stream: EventStreamClient | null = null;

  constructor(
    private baseUrl: string,
    private opts: AppOptions = {},
  ) {
    this.api = new ApiClient(baseUrl, opts.fetchFn);
  }

  /** Pull every snapshot once; used at startup and after reconnects. */
  async refreshSnapshots(): Promise<void> {
    const [tracks, detections, fences, cues] = await Promise.all([
      this.api.getTracks(),
      this.api.getDetections(),
      this.api.getGeofences(),
      this.api.getCues(),
    ]);
    this.state.applyTracks(tracks.tracks);
    this.state.applyDetections(detections);
    this.state.applyGeofences(fences);
    this.state.applyCues(cues);
  }

  /** Start the live view; resolves when stop() is called. */
  async syncView(): Promise<void> {
    await this.refreshSnapshots();
    this.stream = new EventStreamClient(this.baseUrl, {
      sinceSeq: this.state.eventLogCursor,
      fetchFn: this.opts.fetchFn,
      retryDelayMs: this.opts.retryDelayMs,
      onRecord: (record) => {
        this.state.applyEvent(record);
        this.opts.onUpdate?.(this.state);
      },
      onStatus: (status) => {
        this.state.stale = status !== 'live';
      },
    });
    await this.stream.run();
  }

  stop(): void {
    this.stream?.stop();
  }
}
