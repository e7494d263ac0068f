// HTTP + WebSocket client for the orchestrator. The socket reconnects
// with exponential backoff and triggers a state resync on every
// (re)connect so the view never depends on client-side simulation.

import { MessagePayload, SessionEvent, StateSnapshot } from './types.js';

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    throw new ApiError(`${response.status}: ${await response.text()}`, response.status);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async createSession(options: {
    seed?: number;
    config?: Record<string, unknown>;
    scenario?: Record<string, unknown>;
    realtimeFactor?: number;
    sessionId?: string;
  } = {}): Promise<string> {
    const body = {
      seed: options.seed ?? 0,
      config: options.config ?? null,
      scenario: options.scenario ?? null,
      realtime_factor: options.realtimeFactor ?? 1.0,
      session_id: options.sessionId ?? null,
    };
    const data = await asJson<{ id: string }>(
      await fetch(`${this.baseUrl}/sessions`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      }),
    );
    return data.id;
  }

  async sendMessage(
    sessionId: string,
    kind: 'command' | 'question',
    payload: MessagePayload,
  ): Promise<SessionEvent[]> {
    const data = await asJson<{ events: SessionEvent[] }>(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/messages`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ kind, payload }),
      }),
    );
    return data.events;
  }

  async getState(sessionId: string): Promise<StateSnapshot> {
    const data = await asJson<{ state: StateSnapshot }>(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/state`),
    );
    return data.state;
  }

  async getTrees(sessionId: string): Promise<Record<string, string | null>> {
    const data = await asJson<{ trees: Record<string, string | null> }>(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/tree`),
    );
    return data.trees;
  }

  async advance(sessionId: string, durationMs: number): Promise<SessionEvent[]> {
    const data = await asJson<{ events: SessionEvent[] }>(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/advance`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ duration_ms: durationMs }),
      }),
    );
    return data.events;
  }

  eventsUrl(sessionId: string): string {
    return `${this.baseUrl.replace(/^http/, 'ws')}/sessions/${sessionId}/events`;
  }
}

export interface SocketCallbacks {
  onEvent: (event: SessionEvent) => void;
  onOpen: () => void;
  onClose: (reason: string) => void;
}

type WebSocketFactory = (url: string) => WebSocket;

export class SessionSocket {
  private socket: WebSocket | null = null;
  private closed = false;
  private retryMs = 250;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly callbacks: SocketCallbacks,
    private readonly factory: WebSocketFactory = (u) => new WebSocket(u),
    private readonly maxRetryMs = 5000,
  ) {}

  connect(): void {
    if (this.closed) {
      return;
    }
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 250;
      this.callbacks.onOpen();
    };
    socket.onmessage = (message: MessageEvent) => {
      try {
        this.callbacks.onEvent(JSON.parse(String(message.data)) as SessionEvent);
      } catch {
        // non-JSON frames are ignored
      }
    };
    socket.onclose = () => this.scheduleReconnect('connection closed');
    socket.onerror = () => {
      // the close handler follows and owns scheduling
    };
  }

  private scheduleReconnect(reason: string): void {
    this.callbacks.onClose(reason);
    if (this.closed) {
      return;
    }
    this.timer = setTimeout(() => this.connect(), this.retryMs);
    this.retryMs = Math.min(this.retryMs * 2, this.maxRetryMs);
  }

  close(): void {
    this.closed = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.socket?.close();
  }
}

/** Wire a socket to a view model: resync state on every (re)connect so a
 * dropped connection never leaves stale geometry on screen. */
export function connectSession(
  client: ApiClient,
  sessionId: string,
  viewModel: {
    applySnapshot: (s: StateSnapshot) => void;
    applyEvent: (e: SessionEvent) => boolean;
    setConnected: (up: boolean, reason?: string) => void;
  },
  factory?: WebSocketFactory,
): SessionSocket {
  const socket = new SessionSocket(
    client.eventsUrl(sessionId),
    {
      onOpen: () => {
        viewModel.setConnected(true);
        client
          .getState(sessionId)
          .then((snapshot) => viewModel.applySnapshot(snapshot))
          .catch(() => viewModel.setConnected(false, 'state resync failed'));
      },
      onEvent: (event) => viewModel.applyEvent(event),
      onClose: (reason) => viewModel.setConnected(false, reason),
    },
    factory,
  );
  socket.connect();
  return socket;
}
