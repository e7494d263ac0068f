// Browser entry point: wire the API client, socket and view model to the
// page. The command composer submits free text or structured tasks; the
// message kind is always explicit.

import { ApiClient, connectSession } from './client.js';
import { renderBanner, renderBt, renderStatusBar, renderTranscript, drawField } from './render.js';
import { MessagePayload, TaskSpecPayload } from './types.js';
import { ConsoleViewModel } from './viewmodel.js';

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing #${id}`);
  }
  return found as T;
}

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get('server') ?? 'http://127.0.0.1:8000';
  const client = new ApiClient(server);
  let sessionId = params.get('session');
  if (!sessionId) {
    sessionId = await client.createSession({ realtimeFactor: 1.0, seed: Date.now() % 100000 });
    const url = new URL(window.location.href);
    url.searchParams.set('session', sessionId);
    window.history.replaceState(null, '', url.toString());
  }
  element<HTMLElement>('session-label').textContent = `session ${sessionId} @ ${server}`;

  const viewModel = new ConsoleViewModel();
  connectSession(client, sessionId, viewModel);

  const canvas = element<HTMLCanvasElement>('field');
  const btPanel = element<HTMLElement>('bt-panel');
  const transcript = element<HTMLElement>('transcript');
  const statusBar = element<HTMLElement>('status-bar');
  const banner = element<HTMLElement>('banner');
  const agentSelect = element<HTMLSelectElement>('agent-select');

  let renderedVersion = -1;
  function refresh(): void {
    if (viewModel.version !== renderedVersion) {
      renderedVersion = viewModel.version;
      drawField(canvas, viewModel.state);
      const known = [...viewModel.agents.keys()];
      for (const agentId of known) {
        const options = Array.from(agentSelect.options);
        if (!options.some((o) => o.value === agentId)) {
          const option = document.createElement('option');
          option.value = agentId;
          option.textContent = agentId;
          agentSelect.appendChild(option);
        }
      }
      const selected = agentSelect.value || known[0] || 'r1';
      renderBt(btPanel, viewModel, selected);
      renderTranscript(transcript, viewModel);
      renderBanner(banner, viewModel);
    }
    renderStatusBar(statusBar, viewModel);
    window.requestAnimationFrame(refresh);
  }
  window.requestAnimationFrame(refresh);

  const textInput = element<HTMLInputElement>('message-text');
  const tasksInput = element<HTMLTextAreaElement>('tasks-json');

  function payloadFromForm(): MessagePayload {
    const payload: MessagePayload = { text: textInput.value.trim() };
    const agent = agentSelect.value;
    if (agent) {
      payload.agent = agent;
    }
    const rawTasks = tasksInput.value.trim();
    if (rawTasks) {
      payload.tasks = JSON.parse(rawTasks) as TaskSpecPayload[];
    }
    return payload;
  }

  async function submit(kind: 'command' | 'question'): Promise<void> {
    const payload = payloadFromForm();
    if (!payload.text) {
      return;
    }
    try {
      await client.sendMessage(sessionId!, kind, payload);
      textInput.value = '';
    } catch (error) {
      viewModel.applyEvent({
        type: 'reject',
        t_ms: viewModel.lastTms,
        agent: payload.agent ?? '',
        reason: String(error),
        violations: [],
      });
    }
  }

  element<HTMLButtonElement>('send-command').addEventListener('click', () => submit('command'));
  element<HTMLButtonElement>('send-question').addEventListener('click', () => submit('question'));
  textInput.addEventListener('keydown', (keyEvent) => {
    if (keyEvent.key === 'Enter') {
      submit('command');
    }
  });
}

start().catch((error) => {
  const banner = document.getElementById('banner');
  if (banner) {
    banner.textContent = `failed to start: ${error}`;
    banner.classList.remove('hidden');
  }
});
