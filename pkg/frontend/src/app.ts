/** Wires the session client and view projections to the page. */

import {
  NoOutstandingQuestion,
  ServiceUnreachable,
  SessionClient,
  SessionGone,
} from "./client.js";
import type { DemoRecord, Snapshot } from "./protocol.js";
import { resultView, sessionView } from "./view.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el as T;
}

const serviceUrl = byId<HTMLInputElement>("service-url");
const loadButton = byId<HTMLButtonElement>("load-records");
const recordSelect = byId<HTMLSelectElement>("record-select");
const startButton = byId<HTMLButtonElement>("start");
const errorBanner = byId<HTMLDivElement>("error-banner");
const errorText = byId<HTMLSpanElement>("error-text");
const retryButton = byId<HTMLButtonElement>("retry");
const sessionSection = byId<HTMLElement>("session");
const utteranceEl = byId<HTMLParagraphElement>("utterance");
const statusLine = byId<HTMLParagraphElement>("status-line");
const questionText = byId<HTMLParagraphElement>("question-text");
const hypothesisEl = byId<HTMLParagraphElement>("hypothesis");
const yesButton = byId<HTMLButtonElement>("answer-yes");
const noButton = byId<HTMLButtonElement>("answer-no");
const giveUpButton = byId<HTMLButtonElement>("give-up");
const transcriptList = byId<HTMLUListElement>("transcript");
const chunkList = byId<HTMLUListElement>("chunks");
const structureEl = byId<HTMLPreElement>("structure");
const resultPanel = byId<HTMLDivElement>("result-panel");
const paraphraseEl = byId<HTMLParagraphElement>("paraphrase");
const finalStructureEl = byId<HTMLPreElement>("final-structure");
const accuracyEl = byId<HTMLParagraphElement>("accuracy");

let client = new SessionClient(serviceUrl.value);
let records: DemoRecord[] = [];
let sessionId: string | null = null;
let retryAction: (() => Promise<void>) | null = null;

function clearError(): void {
  errorBanner.hidden = true;
  retryAction = null;
}

function showError(message: string, retry: (() => Promise<void>) | null): void {
  errorText.textContent = message;
  retryButton.hidden = retry === null;
  errorBanner.hidden = false;
  retryAction = retry;
}

/** Runs a service call; on failure, explains and offers a retry when sane. */
async function guarded(action: () => Promise<void>): Promise<void> {
  try {
    await action();
    clearError();
  } catch (err) {
    if (err instanceof ServiceUnreachable) {
      showError(
        "The repair service is not responding. Check that it is running, then retry.",
        action,
      );
    } else if (err instanceof SessionGone) {
      sessionId = null;
      renderControls(false);
      showError(
        "This session no longer exists on the service. Start a new one.",
        null,
      );
    } else if (err instanceof NoOutstandingQuestion) {
      showError("There is no question waiting for an answer.", null);
    } else {
      showError(err instanceof Error ? err.message : String(err), null);
    }
  }
}

function renderList(target: HTMLUListElement, lines: string[]): void {
  target.replaceChildren(
    ...lines.map((line) => {
      const item = document.createElement("li");
      item.textContent = line;
      return item;
    }),
  );
}

function renderChunks(lines: { label: string; consumed: boolean }[]): void {
  chunkList.replaceChildren(
    ...lines.map((line) => {
      const item = document.createElement("li");
      item.textContent = line.label;
      if (line.consumed) item.className = "used";
      return item;
    }),
  );
}

function renderControls(enabled: boolean): void {
  yesButton.disabled = !enabled;
  noButton.disabled = !enabled;
  giveUpButton.disabled = sessionId === null;
}

function renderSnapshot(snapshot: Snapshot): void {
  const view = sessionView(snapshot);
  sessionSection.hidden = false;
  utteranceEl.textContent = `Utterance: ${view.utteranceText}`;
  statusLine.textContent =
    view.status === "done"
      ? `Finished after ${view.questionsUsed} question(s).`
      : `Question ${view.questionsUsed + 1}`;
  questionText.textContent = view.questionText ?? "";
  hypothesisEl.textContent = view.hypothesis ?? "";
  renderControls(view.answersEnabled);
  renderList(transcriptList, view.transcriptLines);
  renderChunks(view.chunkLines);
  structureEl.textContent = view.structureText;
  resultPanel.hidden = true;
}

async function showResult(): Promise<void> {
  if (sessionId === null) return;
  const view = resultView(await client.result(sessionId));
  resultPanel.hidden = false;
  paraphraseEl.textContent = view.paraphrase;
  finalStructureEl.textContent = view.structureText;
  accuracyEl.textContent = view.accuracyText ?? "";
  renderList(transcriptList, view.transcriptLines);
}

async function afterStep(snapshot: Snapshot): Promise<void> {
  renderSnapshot(snapshot);
  if (snapshot.status === "done") {
    await showResult();
  }
}

async function loadRecords(): Promise<void> {
  client = new SessionClient(serviceUrl.value);
  records = await client.demoRecords();
  recordSelect.replaceChildren(
    ...records.map((record) => {
      const option = document.createElement("option");
      option.value = String(record.index);
      option.textContent = `${record.index + 1}. ${record.utterance.join(" ")}`;
      return option;
    }),
  );
  startButton.disabled = records.length === 0;
}

async function startSession(): Promise<void> {
  const chosen = records[Number(recordSelect.value)];
  if (chosen === undefined) return;
  const snapshot = await client.createSession(chosen.record);
  sessionId = snapshot.session_id;
  await afterStep(snapshot);
}

async function sendAnswer(reply: "yes" | "no"): Promise<void> {
  if (sessionId === null) return;
  await afterStep(await client.answer(sessionId, reply));
}

async function giveUp(): Promise<void> {
  if (sessionId === null) return;
  await afterStep(await client.abort(sessionId));
}

loadButton.addEventListener("click", () => void guarded(loadRecords));
startButton.addEventListener("click", () => void guarded(startSession));
yesButton.addEventListener("click", () => void guarded(() => sendAnswer("yes")));
noButton.addEventListener("click", () => void guarded(() => sendAnswer("no")));
giveUpButton.addEventListener("click", () => void guarded(giveUp));
retryButton.addEventListener("click", () => {
  const action = retryAction;
  if (action !== null) void guarded(action);
});

renderControls(false);
