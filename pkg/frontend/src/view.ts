/** Pure projections from wire types to what the page renders. */

import type {
  ChunkView,
  SessionResult,
  Snapshot,
  TranscriptEntry,
} from "./protocol.js";

export interface ChunkLine {
  label: string;
  consumed: boolean;
}

export interface SessionView {
  status: "awaiting-answer" | "done";
  /** Yes/no controls are live only while a question is outstanding. */
  answersEnabled: boolean;
  questionText: string | null;
  hypothesis: string | null;
  utteranceText: string;
  paraphrase: string;
  structureText: string;
  chunkLines: ChunkLine[];
  transcriptLines: string[];
  questionsUsed: number;
}

export interface ResultView {
  paraphrase: string;
  structureText: string;
  transcriptLines: string[];
  questionsUsed: number;
  /** e.g. "accuracy 0.667", or null when the record had no reference. */
  accuracyText: string | null;
}

export function transcriptLines(entries: TranscriptEntry[]): string[] {
  const lines: string[] = [];
  entries.forEach((entry, i) => {
    lines.push(`Q${i + 1}: ${entry.question}`);
    lines.push(`A${i + 1}: ${entry.answer}`);
  });
  return lines;
}

export function chunkLine(chunk: ChunkView): ChunkLine {
  const kind = chunk.leaf_type ?? "untyped";
  return {
    label: `#${chunk.id} ${kind} ${chunk.fs}`,
    consumed: chunk.consumed,
  };
}

export function sessionView(snapshot: Snapshot): SessionView {
  const awaiting = snapshot.status === "awaiting-answer";
  return {
    status: snapshot.status,
    answersEnabled: awaiting && snapshot.text !== null,
    questionText: snapshot.text,
    hypothesis: snapshot.hypothesis_summary,
    utteranceText: snapshot.utterance.join(" "),
    paraphrase: snapshot.ilt_paraphrase,
    structureText: snapshot.ilt_pretty,
    chunkLines: snapshot.chunks.map(chunkLine),
    transcriptLines: transcriptLines(snapshot.transcript),
    questionsUsed: snapshot.questions_used,
  };
}

export function resultView(result: SessionResult): ResultView {
  return {
    paraphrase: result.paraphrase,
    structureText: result.final_ilt_pretty,
    transcriptLines: transcriptLines(result.transcript),
    questionsUsed: result.questions_used,
    accuracyText:
      result.accuracy_after === undefined
        ? null
        : `accuracy ${result.accuracy_after.toFixed(3)}`,
  };
}
