// Controller: wires the service client to the view-model and renderer.
// One request may be in flight per session; the buttons stay disabled
// until it settles, and a failed transport keeps a retry closure around.

import { ApiError, ServiceClient } from './api.js';
import {
  applyEnvelope,
  applyError,
  applyFinal,
  applyPending,
  emptyView,
  type SessionView,
} from './state.js';
import { render } from './ui.js';

export class FlowApp {
  view: SessionView = emptyView();
  private lastAction: (() => Promise<void>) | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ServiceClient,
  ) {
    this.render();
  }

  render(): void {
    render(this.root, this.view, {
      onAsk: (question) => void this.ask(question),
      onFeedback: (text) => void this.feedback(text),
      onApprove: () => void this.approve(),
      onRetry: () => void this.retry(),
    });
  }

  private update(view: SessionView): void {
    this.view = view;
    this.render();
  }

  private async run(action: () => Promise<void>): Promise<void> {
    if (this.view.pending) {
      return;
    }
    this.lastAction = action;
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.update(applyError(this.view, error.message, error.retryable));
      } else {
        this.update(applyError(this.view, String(error), false));
      }
    }
  }

  async ask(question: string): Promise<void> {
    const trimmed = question.trim();
    if (!trimmed) {
      this.update(applyError(this.view, 'Please enter a question.', false));
      return;
    }
    await this.run(async () => {
      this.update(applyPending(this.view, trimmed));
      let sessionId = this.view.sessionId;
      if (sessionId === null) {
        const created = await this.client.createSession();
        sessionId = created.session_id;
        this.update({ ...applyEnvelope(this.view, created), pending: true, question: trimmed });
      }
      const envelope = await this.client.query(sessionId, trimmed);
      this.update(applyEnvelope(this.view, envelope));
    });
  }

  async feedback(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed) {
      this.update(applyError(this.view, 'Feedback must not be empty.', false));
      return;
    }
    const sessionId = this.view.sessionId;
    if (sessionId === null) {
      return;
    }
    await this.run(async () => {
      this.update(applyPending(this.view));
      const envelope = await this.client.feedback(sessionId, trimmed);
      this.update(applyEnvelope(this.view, envelope));
    });
  }

  async approve(): Promise<void> {
    const sessionId = this.view.sessionId;
    if (sessionId === null) {
      return;
    }
    await this.run(async () => {
      this.update(applyPending(this.view));
      const final = await this.client.approve(sessionId);
      this.update(applyFinal(this.view, final));
    });
  }

  async retry(): Promise<void> {
    const action = this.lastAction;
    if (action === null) {
      return;
    }
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.update(applyError(this.view, error.message, error.retryable));
      } else {
        this.update(applyError(this.view, String(error), false));
      }
    }
  }
}
