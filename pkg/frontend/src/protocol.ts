/** Wire types for the repair session service (JSON over HTTP). */

export type SessionStatus = "awaiting-answer" | "done";

export interface ChunkView {
  id: number;
  fs: string;
  symbols: string[];
  leaf_type: string | null;
  consumed: boolean;
}

export interface TranscriptEntry {
  question: string;
  answer: string;
}

/** Session state as returned by create, question, answer, and abort. */
export interface Snapshot {
  session_id: string;
  status: SessionStatus;
  utterance: string[];
  /** The outstanding question, or null when none is pending. */
  text: string | null;
  hypothesis_summary: string | null;
  ilt: string;
  ilt_pretty: string;
  ilt_paraphrase: string;
  chunks: ChunkView[];
  transcript: TranscriptEntry[];
  questions_used: number;
}

export interface SessionResult {
  session_id: string;
  status: SessionStatus;
  final_ilt: string;
  final_ilt_pretty: string;
  paraphrase: string;
  questions_used: number;
  transcript: TranscriptEntry[];
  transcript_text: string;
  /** Present only when the session's record carried a gold structure. */
  accuracy_after?: number;
}

export interface DemoRecord {
  index: number;
  utterance: string[];
  record: string;
}
