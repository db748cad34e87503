import type { EventRecord } from './types';

export type StreamStatus = 'connecting' | 'live' | 'stale' | 'stopped';

export interface StreamOptions {
  /** resume point; records with seq <= cursor are never delivered */
  sinceSeq?: number;
  fetchFn?: typeof fetch;
  /** wait before reconnecting after a drop */
  retryDelayMs?: number;
  onRecord: (record: EventRecord) => void;
  onStatus?: (status: StreamStatus) => void;
}

/**
 * Resumable reader for the server-push event stream.
 *
 * Keeps a monotone seq cursor; every disconnect reconnects with
 * ?since_seq=<cursor>, so the delivered sequence has no gaps and no
 * duplicates regardless of how often the connection drops.
 */
export class EventStreamClient {
  cursor: number;
  status: StreamStatus = 'stopped';
  private stopped = false;
  private readonly fetchFn: typeof fetch;
  private readonly retryDelayMs: number;

  constructor(
    private baseUrl: string,
    private opts: StreamOptions,
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.cursor = opts.sinceSeq ?? 0;
    this.fetchFn = opts.fetchFn ?? fetch;
    this.retryDelayMs = opts.retryDelayMs ?? 1000;
  }

  stop(): void {
    this.stopped = true;
    this.setStatus('stopped');
  }

  private setStatus(status: StreamStatus): void {
    this.status = status;
    this.opts.onStatus?.(status);
  }

  /** Runs until stop(); resolves after the final disconnect. */
  async run(): Promise<void> {
    this.stopped = false;
    while (!this.stopped) {
      this.setStatus('connecting');
      try {
        await this.consumeOnce();
      } catch {
        // fall through to retry
      }
      if (this.stopped) break;
      this.setStatus('stale');
      await delay(this.retryDelayMs);
    }
  }

  private async consumeOnce(): Promise<void> {
    const resp = await this.fetchFn(
      `${this.baseUrl}/events/stream?since_seq=${this.cursor}`,
      { headers: { accept: 'text/event-stream' } },
    );
    if (!resp.ok || !resp.body) throw new Error(`stream HTTP ${resp.status}`);
    this.setStatus('live');
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    let buf = '';
    for (;;) {
      const { done, value } = await reader.read();
      if (this.stopped) {
        await reader.cancel().catch(() => undefined);
        return;
      }
      if (done) throw new Error('stream closed');
      buf += decoder.decode(value, { stream: true });
      let idx: number;
      while ((idx = buf.indexOf('\n\n')) >= 0) {
        const block = buf.slice(0, idx);
        buf = buf.slice(idx + 2);
        this.handleBlock(block);
      }
    }
  }

  private handleBlock(block: string): void {
    const lines = block.split('\n').filter((l) => l.length > 0);
    if (lines.length === 0 || lines[0].startsWith(':')) return; // keepalive
    const dataLine = lines.find((l) => l.startsWith('data:'));
    if (!dataLine) return;
    const record = JSON.parse(dataLine.slice(5).trim()) as EventRecord;
    // duplicates can only arise from a reconnect race; the cursor drops them
    if (record.seq <= this.cursor) return;
    if (record.seq !== this.cursor + 1) {
      throw new Error(`stream gap: expected ${this.cursor + 1}, got ${record.seq}`);
    }
    this.cursor = record.seq;
    this.opts.onRecord(record);
  }
}

function delay(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
