// Session view-model: a pure projection of service responses.
//
// Nothing in here derives or rewrites an answer; every displayed string
// comes verbatim from a SessionEnvelope or FinalAnswer the service sent.

import type { FinalAnswer, SessionEnvelope } from './types.js';

export interface SessionView {
  sessionId: string | null;
  stateBadge: string;
  question: string;
  code: string;
  summary: string;
  answer: string;
  draftOk: boolean;
  diagnostics: string[];
  feedbackHistory: string[];
  /** previous draft's code when at least two drafts exist (diff view) */
  previousCode: string | null;
  final: FinalAnswer | null;
  banner: string | null;
  retryable: boolean;
  pending: boolean;
}

export function emptyView(): SessionView {
  return {
    sessionId: null,
    stateBadge: 'NEW',
    question: '',
    code: '',
    summary: '',
    answer: '',
    draftOk: false,
    diagnostics: [],
    feedbackHistory: [],
    previousCode: null,
    final: null,
    banner: null,
    retryable: false,
    pending: false,
  };
}

export function applyEnvelope(view: SessionView, envelope: SessionEnvelope): SessionView {
  const draft = envelope.draft;
  const drafts = envelope.drafts ?? [];
  return {
    ...view,
    sessionId: envelope.session_id,
    stateBadge: envelope.state,
    code: draft?.code ?? '',
    summary: draft?.summary ?? '',
    answer: draft?.answer ?? '',
    draftOk: draft?.ok ?? false,
    diagnostics: draft ? [...draft.diagnostics, ...(draft.error ? [draft.error] : [])] : [],
    feedbackHistory: [...envelope.feedback_history],
    previousCode: drafts.length >= 2 ? drafts[drafts.length - 2].code : null,
    banner: null,
    retryable: false,
    pending: false,
  };
}

export function applyFinal(view: SessionView, final: FinalAnswer): SessionView {
  return {
    ...view,
    stateBadge: 'DONE',
    final,
    banner: null,
    retryable: false,
    pending: false,
  };
}

export function applyError(view: SessionView, message: string, retryable: boolean): SessionView {
  return { ...view, banner: message, retryable, pending: false };
}

export function applyPending(view: SessionView, question?: string): SessionView {
  return {
    ...view,
    pending: true,
    banner: null,
    retryable: false,
    ...(question === undefined ? {} : { question }),
  };
}
