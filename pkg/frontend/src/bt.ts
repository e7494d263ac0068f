// Strategy-XML parsing for the tree panel. The orchestrator emits a small
// canonical dialect (elements + attributes, no text nodes), so a compact
// scanner keeps the console dependency-free in both browser and tests.

export interface BtNodeView {
  kind: string;
  id: string;
  params: Record<string, string>;
  children: BtNodeView[];
  path: string; // mirrors the engine's trace paths: Main/0/task0_X/1 ...
}

export interface BtDocument {
  mainTreeId: string;
  trees: Record<string, BtNodeView>;
}

interface RawElement {
  tag: string;
  attrs: Record<string, string>;
  children: RawElement[];
}

const TAG_RE = /<\s*(\/?)([A-Za-z_][\w.-]*)((?:\s+[\w.-]+\s*=\s*"[^"]*")*)\s*(\/?)\s*>/g;
const ATTR_RE = /([\w.-]+)\s*=\s*"([^"]*)"/g;

export class BtParseError extends Error {}

function parseRaw(xml: string): RawElement {
  const stack: RawElement[] = [];
  let root: RawElement | null = null;
  let match: RegExpExecArray | null;
  TAG_RE.lastIndex = 0;
  while ((match = TAG_RE.exec(xml)) !== null) {
    const [, closing, tag, attrText, selfClosing] = match;
    if (closing) {
      const open = stack.pop();
      if (!open || open.tag !== tag) {
        throw new BtParseError(`mismatched </${tag}>`);
      }
      continue;
    }
    const attrs: Record<string, string> = {};
    let attrMatch: RegExpExecArray | null;
    ATTR_RE.lastIndex = 0;
    while ((attrMatch = ATTR_RE.exec(attrText)) !== null) {
      attrs[attrMatch[1]] = attrMatch[2];
    }
    const element: RawElement = { tag, attrs, children: [] };
    if (stack.length > 0) {
      stack[stack.length - 1].children.push(element);
    } else if (root === null) {
      root = element;
    } else {
      throw new BtParseError('multiple document elements');
    }
    if (!selfClosing) {
      stack.push(element);
    }
  }
  if (stack.length > 0) {
    throw new BtParseError(`unclosed <${stack[stack.length - 1].tag}>`);
  }
  if (root === null) {
    throw new BtParseError('no document element');
  }
  return root;
}

function toView(element: RawElement, path: string): BtNodeView {
  const { ID, ...params } = element.attrs;
  return {
    kind: element.tag,
    id: ID ?? '',
    params,
    children: element.children.map((child, i) => toView(child, `${path}/${i}`)),
    path,
  };
}

export function parseBtXml(xml: string): BtDocument {
  const root = parseRaw(xml);
  if (root.tag !== 'root') {
    throw new BtParseError(`document element is <${root.tag}>, expected <root>`);
  }
  const mainTreeId = root.attrs['main_tree_to_execute'];
  if (!mainTreeId) {
    throw new BtParseError('missing main_tree_to_execute');
  }
  const trees: Record<string, BtNodeView> = {};
  for (const holder of root.children) {
    if (holder.tag !== 'BehaviorTree' || holder.children.length !== 1) {
      throw new BtParseError('expected <BehaviorTree> with one root node');
    }
    const treeId = holder.attrs['ID'];
    if (!treeId) {
      throw new BtParseError('BehaviorTree without ID');
    }
    trees[treeId] = toView(holder.children[0], treeId);
  }
  if (!(mainTreeId in trees)) {
    throw new BtParseError(`main tree ${mainTreeId} not defined`);
  }
  return { mainTreeId, trees };
}

// Leaf events carry engine paths rooted at the main tree and crossing
// SubTree boundaries (Main/0/task0_X/1). A SubTree node at Main/0 owns
// the subtree whose nodes are Main/0/<treeId>/...; translate each tree's
// local path into the engine path space for status lookups.
export function enginePaths(doc: BtDocument): Map<string, BtNodeView> {
  const map = new Map<string, BtNodeView>();

  function visit(node: BtNodeView, engineBase: string, localBase: string): void {
    const enginePath = node.path.replace(localBase, engineBase);
    map.set(enginePath, node);
    if (node.kind === 'SubTree' && doc.trees[node.id]) {
      visit(doc.trees[node.id], `${enginePath}/${node.id}`, node.id);
    }
    for (const child of node.children) {
      visit(child, engineBase, localBase);
    }
  }

  visit(doc.trees[doc.mainTreeId], doc.mainTreeId, doc.mainTreeId);
  return map;
}
