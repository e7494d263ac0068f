// DOM rendering: field canvas in mm coordinates, collapsible tree panel
// colored by latest status, transcript and status bar.

import { BtNodeView, enginePaths } from './bt.js';
import { ConsoleViewModel } from './viewmodel.js';
import { StateSnapshot, TickStatusName } from './types.js';

const STATUS_CLASS: Record<TickStatusName, string> = {
  Success: 'status-success',
  Failure: 'status-failure',
  Running: 'status-running',
  NotRun: 'status-notrun',
};

const TEAM_COLORS: Record<string, string> = { blue: '#2563eb', green: '#16a34a' };
const LAYER_COLORS: Record<string, string> = {
  brown: '#92400e',
  yellow: '#eab308',
  pink: '#ec4899',
};

export function drawField(canvas: HTMLCanvasElement, state: StateSnapshot | null): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) {
    return;
  }
  const W = 3000;
  const H = 2000;
  const scale = Math.min(canvas.width / W, canvas.height / H);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.save();
  ctx.scale(scale, scale);
  ctx.fillStyle = '#f6f3ea';
  ctx.fillRect(0, 0, W, H);
  ctx.strokeStyle = '#555';
  ctx.lineWidth = 8;
  ctx.strokeRect(0, 0, W, H);
  if (!state) {
    ctx.restore();
    return;
  }
  for (const plate of state.plates) {
    ctx.beginPath();
    ctx.arc(plate.x_mm, plate.y_mm, plate.radius_mm, 0, Math.PI * 2);
    ctx.fillStyle = (TEAM_COLORS[plate.team] ?? '#999') + '22';
    ctx.fill();
    ctx.strokeStyle = TEAM_COLORS[plate.team] ?? '#999';
    ctx.lineWidth = 3;
    ctx.stroke();
  }
  for (const basket of state.baskets) {
    ctx.fillStyle = TEAM_COLORS[basket.team] ?? '#999';
    ctx.fillRect(basket.x_mm - 60, basket.y_mm - 60, 120, 120);
  }
  for (const [x, y] of state.cherries) {
    ctx.beginPath();
    ctx.arc(x, y, 15, 0, Math.PI * 2);
    ctx.fillStyle = '#dc2626';
    ctx.fill();
  }
  for (const cake of state.cakes) {
    ctx.beginPath();
    ctx.arc(cake.x_mm, cake.y_mm, 60, 0, Math.PI * 2);
    ctx.fillStyle = LAYER_COLORS[cake.layers[cake.layers.length - 1]] ?? '#aaa';
    ctx.fill();
    if (cake.cherry_on_top) {
      ctx.beginPath();
      ctx.arc(cake.x_mm, cake.y_mm, 15, 0, Math.PI * 2);
      ctx.fillStyle = '#dc2626';
      ctx.fill();
    }
  }
  for (const agent of Object.values(state.agents ?? {})) {
    if (agent.path) {
      ctx.beginPath();
      ctx.moveTo(agent.path[0][0], agent.path[0][1]);
      for (const [x, y] of agent.path.slice(1)) {
        ctx.lineTo(x, y);
      }
      ctx.strokeStyle = '#0ea5e9';
      ctx.lineWidth = 8;
      ctx.setLineDash([40, 30]);
      ctx.stroke();
      ctx.setLineDash([]);
    }
    ctx.fillStyle = 'rgba(14, 165, 233, 0.35)';
    for (const [x, y] of agent.particles ?? []) {
      ctx.fillRect(x - 6, y - 6, 12, 12);
    }
  }
  for (const robot of state.robots) {
    ctx.beginPath();
    ctx.arc(robot.x_mm, robot.y_mm, 180, 0, Math.PI * 2);
    ctx.fillStyle = (TEAM_COLORS[robot.team] ?? '#999') + '66';
    ctx.fill();
    ctx.strokeStyle = TEAM_COLORS[robot.team] ?? '#999';
    ctx.lineWidth = 6;
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(robot.x_mm, robot.y_mm);
    ctx.lineTo(
      robot.x_mm + 180 * Math.cos(robot.theta_rad),
      robot.y_mm + 180 * Math.sin(robot.theta_rad),
    );
    ctx.stroke();
    ctx.fillStyle = '#111';
    ctx.font = '80px sans-serif';
    ctx.fillText(robot.id, robot.x_mm - 50, robot.y_mm - 200);
  }
  ctx.restore();
}

function nodeLabel(node: BtNodeView): string {
  const params = Object.entries(node.params)
    .map(([name, value]) => `${name}=${value}`)
    .join(', ');
  const base = node.id ? `${node.kind} ${node.id}` : node.kind;
  return params ? `${base} (${params})` : base;
}

export function renderBt(
  container: HTMLElement,
  viewModel: ConsoleViewModel,
  agentId: string,
): void {
  container.textContent = '';
  const view = viewModel.agents.get(agentId);
  if (!view) {
    container.textContent = 'no tree dispatched';
    return;
  }
  if (view.treeXmlFallback !== null) {
    const pre = document.createElement('pre');
    pre.className = 'bt-raw-fallback';
    pre.textContent = view.treeXmlFallback;
    container.appendChild(pre);
    return;
  }
  if (!view.tree) {
    container.textContent = 'no tree dispatched';
    return;
  }
  const paths = enginePaths(view.tree);
  const rendered = new Set<string>();

  function renderNode(enginePath: string): HTMLElement {
    const node = paths.get(enginePath)!;
    const item = document.createElement('li');
    const status = viewModel.nodeStatusFor(agentId, enginePath);
    const label = document.createElement('span');
    label.className = `bt-node ${STATUS_CLASS[status]}`;
    label.dataset.path = enginePath;
    label.textContent = nodeLabel(node);
    item.appendChild(label);

    const childPaths: string[] = [];
    if (node.kind === 'SubTree' && !rendered.has(node.id)) {
      rendered.add(node.id);
      childPaths.push(`${enginePath}/${node.id}`);
    }
    for (let i = 0; i < node.children.length; i += 1) {
      childPaths.push(`${enginePath}/${i}`);
    }
    if (childPaths.length > 0) {
      const list = document.createElement('ul');
      for (const childPath of childPaths) {
        if (paths.has(childPath)) {
          list.appendChild(renderNode(childPath));
        }
      }
      item.appendChild(list);
      label.classList.add('bt-collapsible');
      label.addEventListener('click', () => {
        list.classList.toggle('bt-collapsed');
      });
    }
    return item;
  }

  const rootList = document.createElement('ul');
  rootList.className = 'bt-tree';
  rootList.appendChild(renderNode(view.tree.mainTreeId));
  container.appendChild(rootList);
}

export function renderTranscript(container: HTMLElement, viewModel: ConsoleViewModel): void {
  container.textContent = '';
  for (const entry of viewModel.transcript) {
    const row = document.createElement('div');
    row.className = `chat-row chat-${entry.role} chat-kind-${entry.kind}`;
    const time = (entry.t_ms / 1000).toFixed(1).padStart(6);
    row.textContent = `[${time}s] ${entry.role}: ${entry.text}`;
    container.appendChild(row);
  }
  container.scrollTop = container.scrollHeight;
}

export function renderStatusBar(container: HTMLElement, viewModel: ConsoleViewModel): void {
  const countdown = viewModel.switchCountdownMs();
  const pieces = [
    `mode: ${viewModel.adapterMode}`,
    countdown > 0 ? `switching (${(countdown / 1000).toFixed(1)} s left)` : 'ready',
    `score forecast: ${viewModel.scoreForecast}`,
    `sim time: ${(viewModel.lastTms / 1000).toFixed(1)} s`,
  ];
  container.textContent = pieces.join('  |  ');
}

export function renderBanner(container: HTMLElement, viewModel: ConsoleViewModel): void {
  if (viewModel.banner) {
    container.textContent = `DISCONNECTED: ${viewModel.banner} (retrying...)`;
    container.classList.remove('hidden');
  } else {
    container.textContent = '';
    container.classList.add('hidden');
  }
}
