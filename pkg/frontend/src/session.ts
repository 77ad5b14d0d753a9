// Keyboard-driven annotation session for one entry: a focused slot, a
// staged code, and submission through the service. Pure state plus an
// async submit effect, so the whole flow is testable without a DOM.
//
// Keys: digits+letters stage (two keystrokes per code), Backspace edits,
// Enter submits the staged code for the focused slot, Tab advances to
// the next slot (Shift+Tab goes back). Submission is blocked on
// code-level errors; server warnings come back as notices and the code
// stays committed.

import type { DiagnosticPayload, ServiceClient } from './api.js';
import {
  Staged,
  applyKeystroke,
  emptyStaged,
  isComplete,
} from './codes.js';
import type { EntryView } from './views.js';

export interface SlotSession {
  slotKey: string;
  committed: string | null;
  suggestedClass: number | null;
  confirmedSuggestion: boolean;
}

export interface EntrySession {
  datasetId: string;
  annotatorId: string;
  entryId: string;
  slots: SlotSession[];
  focus: number;
  staged: Staged;
  notices: DiagnosticPayload[];
  submitting: boolean;
}

export function startSession(
  datasetId: string,
  annotatorId: string,
  view: EntryView,
): EntrySession {
  return {
    datasetId,
    annotatorId,
    entryId: view.entryId,
    slots: view.cells.map((cell) => ({
      slotKey: cell.slotKey,
      committed: cell.code,
      suggestedClass: cell.suggestedClass,
      confirmedSuggestion: false,
    })),
    focus: 0,
    staged: emptyStaged(),
    notices: [],
    submitting: false,
  };
}

export function focusedSlot(session: EntrySession): SlotSession {
  return session.slots[session.focus];
}

export function advanceFocus(session: EntrySession, backwards = false): EntrySession {
  const count = session.slots.length;
  const focus = (session.focus + (backwards ? count - 1 : 1)) % count;
  return { ...session, focus, staged: emptyStaged() };
}

/** Prefill the staged digit from the slot's suggested class. The staged
 * code still needs its letter and an explicit Enter: nothing persists
 * without the human. */
export function acceptSuggestedClass(session: EntrySession): EntrySession {
  const slot = focusedSlot(session);
  if (slot.suggestedClass === null) return session;
  return { ...session, staged: { text: String(slot.suggestedClass), error: null } };
}

export function keystroke(session: EntrySession, key: string): EntrySession {
  if (key === 'Tab') return advanceFocus(session);
  return { ...session, staged: applyKeystroke(session.staged, key) };
}

export interface SubmitOutcome {
  session: EntrySession;
  accepted: boolean;
  diagnostics: DiagnosticPayload[];
}

/** Submit the staged code for the focused slot. Incomplete staging is a
 * no-op; a rejection keeps the staged text for correction. */
export async function submitStaged(
  session: EntrySession,
  client: ServiceClient,
): Promise<SubmitOutcome> {
  if (!isComplete(session.staged) || session.staged.error) {
    return { session, accepted: false, diagnostics: [] };
  }
  const slot = focusedSlot(session);
  const [language, index] = slot.slotKey.split(':');
  const result = await client.submit({
    dataset_id: session.datasetId,
    annotator_id: session.annotatorId,
    entry_id: session.entryId,
    language,
    lexeme_index: Number(index),
    code: session.staged.text,
  });
  if (!result.accepted) {
    const message = result.diagnostics[0]?.message ?? 'rejected';
    const code = result.diagnostics[0]?.code ?? 'Rejected';
    return {
      session: {
        ...session,
        staged: { text: session.staged.text, error: { code, message } },
      },
      accepted: false,
      diagnostics: result.diagnostics,
    };
  }
  const slots = session.slots.map((s, i) =>
    i === session.focus
      ? {
          ...s,
          committed: session.staged.text,
          confirmedSuggestion: s.suggestedClass !== null,
        }
      : s,
  );
  return {
    session: {
      ...session,
      slots,
      staged: emptyStaged(),
      notices: result.diagnostics,
    },
    accepted: true,
    diagnostics: result.diagnostics,
  };
}

export function completedCount(session: EntrySession): number {
  return session.slots.filter((slot) => slot.committed !== null).length;
}

export function isEntryComplete(session: EntrySession): boolean {
  return session.slots.every((slot) => slot.committed !== null);
}
