// The console's single source of rendered truth. State mutates only from
// server payloads: REST snapshots and the event stream. Events older than
// what we already applied (by seq, falling back to t_ms) are dropped.

import { BtDocument, parseBtXml } from './bt.js';
import {
  AnswerEvent,
  DispatchEvent,
  LeafEvent,
  ModeSwitchEvent,
  RejectEvent,
  ReportEvent,
  SessionEvent,
  StateSnapshot,
  TickStatusName,
} from './types.js';

export interface TranscriptEntry {
  role: 'operator' | 'brain' | 'system';
  kind: string;
  text: string;
  t_ms: number;
}

export interface AgentView {
  tree: BtDocument | null;
  treeXmlFallback: string | null; // raw XML when parsing failed
  nodeStatus: Map<string, TickStatusName>; // engine path -> latest status
  report: ReportEvent | null;
}

export class ConsoleViewModel {
  state: StateSnapshot | null = null;
  transcript: TranscriptEntry[] = [];
  agents = new Map<string, AgentView>();
  adapterMode = 'btGen';
  switchUntilTms: number | null = null;
  scoreForecast = 0;
  connected = false;
  banner: string | null = null;
  lastSeq = -1;
  lastTms = 0;
  version = 0; // bumped on every accepted change, for cheap re-render checks

  private agent(agentId: string): AgentView {
    let view = this.agents.get(agentId);
    if (!view) {
      view = { tree: null, treeXmlFallback: null, nodeStatus: new Map(), report: null };
      this.agents.set(agentId, view);
    }
    return view;
  }

  applySnapshot(snapshot: StateSnapshot): void {
    this.state = snapshot;
    this.adapterMode = snapshot.adapterMode;
    this.scoreForecast = snapshot.score_forecast;
    this.switchUntilTms =
      snapshot.modeSwitchRemainingMs > 0 ? snapshot.t_ms + snapshot.modeSwitchRemainingMs : null;
    this.lastTms = Math.max(this.lastTms, snapshot.t_ms);
    this.version += 1;
  }

  setConnected(connected: boolean, reason?: string): void {
    this.connected = connected;
    this.banner = connected ? null : (reason ?? 'disconnected');
    this.version += 1;
  }

  /** Returns true when the event was applied, false when dropped as stale. */
  applyEvent(event: SessionEvent): boolean {
    if (typeof event.seq === 'number') {
      if (event.seq <= this.lastSeq) {
        return false;
      }
      this.lastSeq = event.seq;
    } else if (event.t_ms < this.lastTms) {
      return false;
    }
    this.lastTms = Math.max(this.lastTms, event.t_ms);
    switch (event.type) {
      case 'message': {
        const payload = event.payload as { text?: string };
        this.transcript.push({
          role: 'operator',
          kind: String(event.kind),
          text: payload?.text ?? JSON.stringify(event.payload),
          t_ms: event.t_ms,
        });
        break;
      }
      case 'dispatch': {
        const dispatch = event as DispatchEvent;
        const view = this.agent(dispatch.agent);
        view.nodeStatus = new Map();
        try {
          view.tree = parseBtXml(dispatch.xml);
          view.treeXmlFallback = null;
        } catch {
          view.tree = null;
          view.treeXmlFallback = dispatch.xml;
        }
        this.transcript.push({
          role: 'brain',
          kind: 'dispatch',
          text: `tree dispatched to ${dispatch.agent}`,
          t_ms: event.t_ms,
        });
        break;
      }
      case 'reject': {
        const reject = event as RejectEvent;
        const details = reject.violations.length ? `: ${reject.violations.join('; ')}` : '';
        this.transcript.push({
          role: 'system',
          kind: 'reject',
          text: `generation rejected (${reject.reason})${details}`,
          t_ms: event.t_ms,
        });
        break;
      }
      case 'answer': {
        const answer = event as AnswerEvent;
        this.transcript.push({
          role: 'brain',
          kind: 'answer',
          text: answer.text,
          t_ms: event.t_ms,
        });
        break;
      }
      case 'modeSwitch': {
        const mode = event as ModeSwitchEvent;
        this.adapterMode = mode.to;
        this.switchUntilTms = event.t_ms + mode.delay_ms;
        this.transcript.push({
          role: 'system',
          kind: 'modeSwitch',
          text: `switching adapter ${mode.from} -> ${mode.to} (${mode.delay_ms} ms)`,
          t_ms: event.t_ms,
        });
        break;
      }
      case 'leaf': {
        const leaf = event as LeafEvent;
        this.agent(leaf.agent).nodeStatus.set(leaf.path, leaf.status);
        break;
      }
      case 'report': {
        const report = event as ReportEvent;
        this.agent(report.agent).report = report;
        this.scoreForecast = report.scoreForecast;
        break;
      }
      case 'treeResolved': {
        this.transcript.push({
          role: 'brain',
          kind: 'treeResolved',
          text: `agent ${String(event.agent)} finished: ${String(event.status)}`,
          t_ms: event.t_ms,
        });
        break;
      }
      default:
        break;
    }
    if (this.switchUntilTms !== null && this.lastTms >= this.switchUntilTms) {
      this.switchUntilTms = null;
    }
    this.version += 1;
    return true;
  }

  switchCountdownMs(): number {
    if (this.switchUntilTms === null) {
      return 0;
    }
    return Math.max(0, this.switchUntilTms - this.lastTms);
  }

  nodeStatusFor(agentId: string, enginePath: string): TickStatusName {
    return this.agents.get(agentId)?.nodeStatus.get(enginePath) ?? 'NotRun';
  }
}
