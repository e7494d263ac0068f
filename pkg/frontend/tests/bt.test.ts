import { describe, expect, it } from 'vitest';

import { BtParseError, enginePaths, parseBtXml } from '../src/bt.js';

const DOC = `<root main_tree_to_execute="Main">
  <BehaviorTree ID="Main">
    <Sequence>
      <SubTree ID="task0_CollectCake" />
    </Sequence>
  </BehaviorTree>
  <BehaviorTree ID="task0_CollectCake">
    <Sequence>
      <Fallback>
        <Condition ID="PathClear" x_mm="1125" y_mm="550" />
        <Action ID="Wait" ms="500" />
      </Fallback>
      <Action ID="MoveTo" x_mm="1125" y_mm="550" />
      <Action ID="GrabCake" gripper="0" />
    </Sequence>
  </BehaviorTree>
</root>
`;

describe('parseBtXml', () => {
  it('parses the canonical dialect', () => {
    const doc = parseBtXml(DOC);
    expect(doc.mainTreeId).toBe('Main');
    expect(Object.keys(doc.trees).sort()).toEqual(['Main', 'task0_CollectCake']);
    const main = doc.trees['Main'];
    expect(main.kind).toBe('Sequence');
    expect(main.children[0].kind).toBe('SubTree');
    expect(main.children[0].id).toBe('task0_CollectCake');
    const sub = doc.trees['task0_CollectCake'];
    expect(sub.children.map((c) => c.kind)).toEqual(['Fallback', 'Action', 'Action']);
    expect(sub.children[1].params).toEqual({ x_mm: '1125', y_mm: '550' });
  });

  it('parses a single-action tree to one node', () => {
    const doc = parseBtXml(
      '<root main_tree_to_execute="T"><BehaviorTree ID="T"><Action ID="Wait" ms="5"/></BehaviorTree></root>',
    );
    expect(doc.trees['T'].kind).toBe('Action');
    expect(doc.trees['T'].children).toHaveLength(0);
  });

  it('rejects malformed documents', () => {
    expect(() => parseBtXml('<root><oops</root>')).toThrow(BtParseError);
    expect(() => parseBtXml('<root main_tree_to_execute="X"></root>')).toThrow(BtParseError);
    expect(() =>
      parseBtXml('<root main_tree_to_execute="T"><BehaviorTree ID="T"><A><B></A></B></BehaviorTree></root>'),
    ).toThrow(BtParseError);
  });

  it('maps engine paths across subtree boundaries', () => {
    const doc = parseBtXml(DOC);
    const paths = enginePaths(doc);
    expect(paths.has('Main')).toBe(true);
    expect(paths.has('Main/0')).toBe(true); // the SubTree node
    expect(paths.get('Main/0/task0_CollectCake/2')?.id).toBe('GrabCake');
    expect(paths.get('Main/0/task0_CollectCake/0/0')?.id).toBe('PathClear');
  });
});
