import { describe, expect, it, vi } from 'vitest';

import { SessionSocket } from '../src/client.js';

type Handler = ((ev: unknown) => void) | null;

class FakeSocket {
  onopen: Handler = null;
  onmessage: Handler = null;
  onclose: Handler = null;
  onerror: Handler = null;
  closedByClient = false;

  close(): void {
    this.closedByClient = true;
    this.onclose?.({});
  }

  emitOpen(): void {
    this.onopen?.({});
  }

  emitMessage(data: unknown): void {
    this.onmessage?.({ data: JSON.stringify(data) });
  }

  drop(): void {
    this.onclose?.({});
  }
}

describe('SessionSocket', () => {
  it('delivers parsed events and reports connection state', () => {
    const sockets: FakeSocket[] = [];
    const events: unknown[] = [];
    const opens: number[] = [];
    const socket = new SessionSocket(
      'ws://x/events',
      {
        onEvent: (e) => events.push(e),
        onOpen: () => opens.push(1),
        onClose: () => undefined,
      },
      () => {
        const fake = new FakeSocket();
        sockets.push(fake);
        return fake as unknown as WebSocket;
      },
    );
    socket.connect();
    sockets[0].emitOpen();
    sockets[0].emitMessage({ type: 'init', t_ms: 0 });
    expect(opens).toHaveLength(1);
    expect(events).toEqual([{ type: 'init', t_ms: 0 }]);
    socket.close();
  });

  it('reconnects with backoff after a drop and resets on success', async () => {
    vi.useFakeTimers();
    const sockets: FakeSocket[] = [];
    const closes: string[] = [];
    const socket = new SessionSocket(
      'ws://x/events',
      {
        onEvent: () => undefined,
        onOpen: () => undefined,
        onClose: (reason) => closes.push(reason),
      },
      () => {
        const fake = new FakeSocket();
        sockets.push(fake);
        return fake as unknown as WebSocket;
      },
    );
    socket.connect();
    sockets[0].emitOpen();
    sockets[0].drop(); // server vanished
    expect(closes).toHaveLength(1);
    expect(sockets).toHaveLength(1);
    await vi.advanceTimersByTimeAsync(250);
    expect(sockets).toHaveLength(2); // first retry after 250 ms
    sockets[1].drop();
    await vi.advanceTimersByTimeAsync(499);
    expect(sockets).toHaveLength(2); // backoff doubled: not yet
    await vi.advanceTimersByTimeAsync(1);
    expect(sockets).toHaveLength(3);
    socket.close();
    vi.useRealTimers();
  });

  it('close() stops reconnect attempts', async () => {
    vi.useFakeTimers();
    const sockets: FakeSocket[] = [];
    const socket = new SessionSocket(
      'ws://x/events',
      { onEvent: () => undefined, onOpen: () => undefined, onClose: () => undefined },
      () => {
        const fake = new FakeSocket();
        sockets.push(fake);
        return fake as unknown as WebSocket;
      },
    );
    socket.connect();
    socket.close();
    await vi.advanceTimersByTimeAsync(10_000);
    expect(sockets).toHaveLength(1);
    vi.useRealTimers();
  });
});
