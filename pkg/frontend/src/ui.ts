// DOM rendering. Full re-render per state change; the app is small
// enough that diffing the DOM would be pure ceremony. The code panels
// are read-only on purpose: feedback is natural language, not code edits.

import { changedLines, diffLines } from './diff.js';
import type { SessionView } from './state.js';

export interface Handlers {
  onAsk(question: string): void;
  onFeedback(text: string): void;
  onApprove(): void;
  onRetry(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = '',
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

function panel(doc: Document, title: string, testId: string, content: string): HTMLElement {
  const section = el(doc, 'section', { class: 'panel', 'data-panel': testId });
  section.appendChild(el(doc, 'h2', {}, title));
  section.appendChild(el(doc, 'pre', { 'data-testid': testId }, content));
  return section;
}

export function render(root: HTMLElement, view: SessionView, handlers: Handlers): void {
  const doc = root.ownerDocument;
  root.textContent = '';

  const header = el(doc, 'header');
  header.appendChild(el(doc, 'h1', {}, 'groundflow'));
  header.appendChild(el(doc, 'span', { 'data-testid': 'state-badge', class: 'badge' }, view.stateBadge));
  root.appendChild(header);

  if (view.banner) {
    const banner = el(doc, 'div', { 'data-testid': 'banner', class: 'banner', role: 'alert' }, view.banner);
    if (view.retryable) {
      const retry = el(doc, 'button', { 'data-testid': 'retry-button' }, 'Retry');
      retry.addEventListener('click', () => handlers.onRetry());
      banner.appendChild(retry);
    }
    root.appendChild(banner);
  }

  // question form
  const form = el(doc, 'div', { class: 'ask' });
  const questionInput = el(doc, 'input', {
    'data-testid': 'question-input',
    placeholder: 'Ask about a fund...',
    value: view.question,
  });
  const askButton = el(doc, 'button', { 'data-testid': 'ask-button' }, 'Ask');
  if (view.pending || view.sessionId !== null) {
    askButton.setAttribute('disabled', '');
  }
  askButton.addEventListener('click', () => handlers.onAsk(questionInput.value));
  form.appendChild(questionInput);
  form.appendChild(askButton);
  root.appendChild(form);

  if (view.final) {
    const final = el(doc, 'section', { class: 'final', 'data-panel': 'final' });
    final.appendChild(el(doc, 'h2', {}, 'Approved answer'));
    final.appendChild(el(doc, 'pre', { 'data-testid': 'final-answer' }, view.final.answer_text));
    final.appendChild(el(doc, 'pre', { 'data-testid': 'final-code' }, view.final.code));
    final.appendChild(
      el(doc, 'p', { 'data-testid': 'final-trace' }, `${view.final.trace.length} API calls recorded`),
    );
    const payload = encodeURIComponent(JSON.stringify(view.final, null, 2));
    final.appendChild(
      el(
        doc,
        'a',
        {
          'data-testid': 'download-link',
          href: `data:application/json;charset=utf-8,${payload}`,
          download: `session-${view.final.session_id}.json`,
        },
        'Download provenance',
      ),
    );
    root.appendChild(final);
    return;
  }

  if (view.sessionId === null) {
    return;
  }

  root.appendChild(panel(doc, 'Workflow code', 'code-panel', view.code));
  root.appendChild(panel(doc, 'Summary', 'summary-panel', view.summary));
  root.appendChild(panel(doc, 'Answer', 'answer-panel', view.answer));

  if (view.diagnostics.length) {
    const diag = el(doc, 'section', { class: 'diagnostics' });
    diag.appendChild(el(doc, 'h2', {}, 'Problems'));
    const list = el(doc, 'ul', { 'data-testid': 'diagnostics' });
    for (const message of view.diagnostics) {
      list.appendChild(el(doc, 'li', {}, message));
    }
    diag.appendChild(list);
    root.appendChild(diag);
  }

  if (view.previousCode !== null) {
    const section = el(doc, 'section', { class: 'diff', 'data-panel': 'diff' });
    section.appendChild(el(doc, 'h2', {}, 'Changes from previous draft'));
    const previous = panel(doc, 'Previous draft', 'previous-code-panel', view.previousCode);
    section.appendChild(previous);
    const table = el(doc, 'div', { 'data-testid': 'diff-panel' });
    const rows = diffLines(view.previousCode, view.code);
    for (const row of rows) {
      const marker = row.kind === 'added' ? '+' : row.kind === 'removed' ? '-' : ' ';
      table.appendChild(
        el(doc, 'div', { class: `diff-line ${row.kind}`, 'data-diff': row.kind }, `${marker} ${row.text}`),
      );
    }
    section.appendChild(table);
    section.appendChild(
      el(
        doc,
        'p',
        { 'data-testid': 'diff-count' },
        `${changedLines(rows).length} changed line(s)`,
      ),
    );
    root.appendChild(section);
  }

  if (view.feedbackHistory.length) {
    const history = el(doc, 'section', { class: 'history' });
    history.appendChild(el(doc, 'h2', {}, 'Feedback so far'));
    const list = el(doc, 'ol', { 'data-testid': 'history-list' });
    for (const entry of view.feedbackHistory) {
      list.appendChild(el(doc, 'li', {}, entry));
    }
    history.appendChild(list);
    root.appendChild(history);
  }

  // feedback + approve controls
  const controls = el(doc, 'div', { class: 'controls' });
  const feedbackInput = el(doc, 'input', {
    'data-testid': 'feedback-input',
    placeholder: 'Type feedback for the workflow...',
  });
  const feedbackButton = el(doc, 'button', { 'data-testid': 'feedback-button' }, 'Send feedback');
  const approveButton = el(doc, 'button', { 'data-testid': 'approve-button' }, 'Approve');
  if (view.pending || view.stateBadge !== 'AWAITING_FEEDBACK') {
    feedbackButton.setAttribute('disabled', '');
  }
  if (view.pending || !view.draftOk) {
    approveButton.setAttribute('disabled', '');
  }
  feedbackButton.addEventListener('click', () => handlers.onFeedback(feedbackInput.value));
  approveButton.addEventListener('click', () => handlers.onApprove());
  controls.appendChild(feedbackInput);
  controls.appendChild(feedbackButton);
  controls.appendChild(approveButton);
  root.appendChild(controls);
}
