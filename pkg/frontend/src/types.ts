// Wire types, mirroring the session service's JSON bodies exactly.

export type SessionState = 'READY' | 'AWAITING_FEEDBACK' | 'DONE' | 'FAILED';

export interface DraftEnvelope {
  code: string;
  summary: string;
  answer: string | null;
  ok: boolean;
  error: string | null;
  diagnostics: string[];
  repaired: boolean;
  feedback_applied: string | null;
}

export interface DraftSummary {
  code: string;
  summary: string;
  answer: string | null;
  ok: boolean;
}

export interface SessionEnvelope {
  version: number;
  session_id: string;
  state: SessionState;
  variant: string;
  draft: DraftEnvelope | null;
  drafts: DraftSummary[];
  feedback_history: string[];
  failure_cause: string | null;
}

export interface TraceEntry {
  step: number;
  name: string;
  args: string[];
  digest: string;
}

export interface FinalAnswer {
  version: number;
  session_id: string;
  answer: unknown;
  answer_text: string;
  code: string;
  summary: string;
  trace: TraceEntry[];
  feedback_history: string[];
}
