// Wire types mirroring the orchestrator service payloads.

export type TickStatusName = 'Success' | 'Failure' | 'Running' | 'NotRun';

export interface SessionEvent {
  type: string;
  t_ms: number;
  seq?: number;
  [key: string]: unknown;
}

export interface LeafEvent extends SessionEvent {
  type: 'leaf';
  agent: string;
  path: string;
  id: string;
  kind: string;
  status: Exclude<TickStatusName, 'NotRun'>;
}

export interface DispatchEvent extends SessionEvent {
  type: 'dispatch';
  agent: string;
  xml: string;
}

export interface AnswerEvent extends SessionEvent {
  type: 'answer';
  agent: string;
  text: string;
  supportingFields: string[];
}

export interface RejectEvent extends SessionEvent {
  type: 'reject';
  agent: string;
  reason: string;
  violations: string[];
}

export interface ModeSwitchEvent extends SessionEvent {
  type: 'modeSwitch';
  from: string;
  to: string;
  delay_ms: number;
}

export interface ReportEvent extends SessionEvent {
  type: 'report';
  agent: string;
  x_mm: number;
  y_mm: number;
  theta_rad: number;
  currentTask: string;
  lastLeaf: string;
  scoreForecast: number;
}

export interface RobotSnapshot {
  id: string;
  team: string;
  x_mm: number;
  y_mm: number;
  theta_rad: number;
  grippers: ({ layers: string[]; cherry: boolean } | null)[];
  cherries_held: number;
}

export interface StateSnapshot {
  t_ms: number;
  own_team: string;
  score_forecast: number;
  robots: RobotSnapshot[];
  cakes: { x_mm: number; y_mm: number; layers: string[]; on_plate: string | null; cherry_on_top: boolean }[];
  cherries: number[][];
  plates: { id: string; x_mm: number; y_mm: number; team: string; radius_mm: number }[];
  baskets: { id: string; x_mm: number; y_mm: number; team: string; cherries: number }[];
  adapterMode: string;
  modeSwitchRemainingMs: number;
  agents: Record<
    string,
    {
      estimate: number[];
      currentTask: string;
      treeStatus: string | null;
      hasTree: boolean;
      particles: number[][];
      path: number[][] | null;
    }
  >;
}

export interface TaskSpecPayload {
  type: string;
  params: Record<string, unknown>;
}

export interface MessagePayload {
  text: string;
  tasks?: TaskSpecPayload[];
  agent?: string;
}
