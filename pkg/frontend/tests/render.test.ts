// @vitest-environment happy-dom

import { describe, expect, it } from 'vitest';

import { renderBt, renderTranscript } from '../src/render.js';
import { ConsoleViewModel } from '../src/viewmodel.js';

function dispatchEvent_(vm: ConsoleViewModel, xml: string): void {
  vm.applyEvent({ type: 'dispatch', t_ms: 0, agent: 'r1', xml, seq: vm.lastSeq + 1 });
}

function bigTreeXml(actions: number): string {
  const subtrees: string[] = [];
  const refs: string[] = [];
  for (let i = 0; i < actions / 4; i += 1) {
    refs.push(`<SubTree ID="part${i}"/>`);
    subtrees.push(
      `<BehaviorTree ID="part${i}"><Sequence>` +
        '<Action ID="MoveTo" x_mm="100" y_mm="100"/>'.repeat(4) +
        '</Sequence></BehaviorTree>',
    );
  }
  return (
    '<root main_tree_to_execute="Main">' +
    `<BehaviorTree ID="Main"><Sequence>${refs.join('')}</Sequence></BehaviorTree>` +
    subtrees.join('') +
    '</root>'
  );
}

describe('renderBt', () => {
  it('renders a single-action tree as one labelled node', () => {
    const vm = new ConsoleViewModel();
    dispatchEvent_(
      vm,
      '<root main_tree_to_execute="T"><BehaviorTree ID="T"><Action ID="Wait" ms="5"/></BehaviorTree></root>',
    );
    const host = document.createElement('div');
    renderBt(host, vm, 'r1');
    const nodes = host.querySelectorAll('.bt-node');
    expect(nodes.length).toBe(1);
    expect(nodes[0].textContent).toContain('Wait');
  });

  it('expands subtrees inline and colors by latest status', () => {
    const vm = new ConsoleViewModel();
    dispatchEvent_(vm, bigTreeXml(8));
    vm.applyEvent({
      type: 'leaf', t_ms: 100, agent: 'r1', path: 'Main/0/part0/0', id: 'MoveTo',
      kind: 'Action', status: 'Running', seq: 99,
    });
    const host = document.createElement('div');
    renderBt(host, vm, 'r1');
    const running = host.querySelector('.status-running');
    expect(running?.getAttribute('data-path')).toBe('Main/0/part0/0');
    expect(host.querySelectorAll('.bt-node').length).toBeGreaterThan(10);
  });

  it('falls back to raw XML on parse failure', () => {
    const vm = new ConsoleViewModel();
    dispatchEvent_(vm, '<root><broken');
    const host = document.createElement('div');
    renderBt(host, vm, 'r1');
    expect(host.querySelector('.bt-raw-fallback')?.textContent).toBe('<root><broken');
  });

  it('renders a 100-node tree within the 100 ms budget', () => {
    const vm = new ConsoleViewModel();
    dispatchEvent_(vm, bigTreeXml(100));
    const host = document.createElement('div');
    const start = performance.now();
    renderBt(host, vm, 'r1');
    const elapsed = performance.now() - start;
    expect(host.querySelectorAll('.bt-node').length).toBeGreaterThanOrEqual(100);
    expect(elapsed).toBeLessThan(100);
  });
});

describe('renderTranscript', () => {
  it('keeps entries in order with role classes', () => {
    const vm = new ConsoleViewModel();
    vm.applyEvent({ type: 'message', t_ms: 0, kind: 'command', payload: { text: 'go' }, seq: 1 });
    vm.applyEvent({ type: 'answer', t_ms: 100, agent: 'r1', text: 'done', supportingFields: [], seq: 2 });
    const host = document.createElement('div');
    renderTranscript(host, vm);
    const rows = host.querySelectorAll('.chat-row');
    expect(rows.length).toBe(2);
    expect(rows[0].className).toContain('chat-operator');
    expect(rows[1].className).toContain('chat-brain');
  });
});
