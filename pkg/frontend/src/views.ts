// View models for the workbench. Everything here is a pure projection
// of service payloads plus local session state: the workbench displays
// the service's numbers verbatim and computes no statistics.

import type { AgreementPayload, EntryPayload, SuggestionPayload } from './api.js';
import { cognateClassOf } from './codes.js';

export const LANGUAGES: { code: string; name: string }[] = [
  { code: 'az', name: 'Azerbaijani' },
  { code: 'kk', name: 'Kazakh' },
  { code: 'ky', name: 'Kyrgyz' },
  { code: 'tt', name: 'Tatar' },
  { code: 'tr', name: 'Turkish' },
  { code: 'tk', name: 'Turkmen' },
  { code: 'ug', name: 'Uyghur' },
  { code: 'uz', name: 'Uzbek' },
];

// One color per canonical cognate class; colors are a pure function of
// the canonical class number, never of raw label choice.
export const CLASS_PALETTE = [
  '#4e79a7', '#f28e2b', '#59a14f', '#e15759',
  '#b07aa1', '#76b7b2', '#edc948', '#9c755f',
];

export function classColor(canonicalClass: number): string {
  return CLASS_PALETTE[(canonicalClass - 1) % CLASS_PALETTE.length];
}

export interface CellView {
  slotKey: string; // "az:0"
  language: string;
  languageName: string;
  lexemeIndex: number;
  form: string;
  transliteration: boolean; // badge shown iff the dictionary romanized it
  code: string | null; // committed code, server-confirmed
  cognateClass: number | null;
  canonicalClass: number | null;
  color: string | null;
  suggestedClass: number | null; // prefilled, awaiting human confirmation
}

export interface EntryView {
  entryId: string;
  gloss: string;
  cells: CellView[];
}

/** Renumber the classes appearing in committed codes 1..k by first
 * occurrence in canonical language order, so colors never depend on
 * which digits the annotator happened to pick. */
export function canonicalClassNumbers(cells: { slotKey: string; cognateClass: number | null }[]): Map<string, number> {
  const relabel = new Map<number, number>();
  const out = new Map<string, number>();
  for (const cell of cells) {
    if (cell.cognateClass === null) continue;
    if (!relabel.has(cell.cognateClass)) {
      relabel.set(cell.cognateClass, relabel.size + 1);
    }
    out.set(cell.slotKey, relabel.get(cell.cognateClass)!);
  }
  return out;
}

export function buildEntryView(
  entry: EntryPayload,
  suggestion: SuggestionPayload | null = null,
): EntryView {
  const cells: CellView[] = [];
  for (const { code: language, name } of LANGUAGES) {
    const lexemes = entry.translations[language] ?? [];
    lexemes.forEach((lexeme, index) => {
      const slotKey = `${language}:${index}`;
      const committed = entry.codes?.[slotKey] ?? null;
      cells.push({
        slotKey,
        language,
        languageName: name,
        lexemeIndex: index,
        form: lexeme.form,
        transliteration: lexeme.script === 'transliteration',
        code: committed,
        cognateClass: committed ? cognateClassOf(committed) : null,
        canonicalClass: null,
        color: null,
        suggestedClass: suggestion ? (suggestion.classes[slotKey] ?? null) : null,
      });
    });
  }
  const canonical = canonicalClassNumbers(cells);
  for (const cell of cells) {
    const value = canonical.get(cell.slotKey) ?? null;
    cell.canonicalClass = value;
    cell.color = value === null ? null : classColor(value);
  }
  return { entryId: entry.entry_id, gloss: entry.gloss, cells };
}

// --- suggestion review -------------------------------------------------------

export interface SuggestionReviewState {
  /** slotKey -> prefilled class digit, still unconfirmed */
  pending: Map<string, number>;
  confirmed: Set<string>;
}

export function startSuggestionReview(suggestion: SuggestionPayload): SuggestionReviewState {
  return {
    pending: new Map(Object.entries(suggestion.classes)),
    confirmed: new Set(),
  };
}

/** Reject everything: slots go back to manual entry. */
export function rejectAll(state: SuggestionReviewState): SuggestionReviewState {
  return { pending: new Map(), confirmed: new Set() };
}

/** The annotator edited a slot by hand: its prefill no longer applies. */
export function editSlot(state: SuggestionReviewState, slotKey: string): SuggestionReviewState {
  const pending = new Map(state.pending);
  pending.delete(slotKey);
  return { pending, confirmed: state.confirmed };
}

/** Confirming a slot stages "<class><letter>" for submission; only
 * confirmed slots ever reach the service. */
export function confirmSlot(
  state: SuggestionReviewState,
  slotKey: string,
  etymologyLetter: string,
): { state: SuggestionReviewState; code: string } | null {
  const klass = state.pending.get(slotKey);
  if (klass === undefined) return null;
  const pending = new Map(state.pending);
  pending.delete(slotKey);
  const confirmed = new Set(state.confirmed);
  confirmed.add(slotKey);
  return { state: { pending, confirmed }, code: `${klass}${etymologyLetter}` };
}

// --- agreement dashboard -------------------------------------------------------

export interface HeatmapCell {
  row: string; // annotator 2 category
  col: string; // annotator 1 category
  count: number;
  intensity: number; // 0..1, display only
}

export interface AgreementView {
  restricted: boolean;
  categories: string[];
  counts: number[][]; // verbatim from the payload
  cells: HeatmapCell[];
  n: number;
  onlyA: number;
  onlyB: number;
  kappa: AgreementPayload['kappa'];
  partition: AgreementPayload['partition_agreement'];
  notes: string[];
  emptyIntersection: boolean;
}

/** Project the agreement payload into the dashboard view. Counts, kappa
 * fields, and notes are carried over exactly as received; the only
 * derived value is a display intensity. */
export function buildAgreementView(payload: AgreementPayload): AgreementView {
  const counts = payload.matrix.counts;
  const max = Math.max(1, ...counts.flat());
  const cells: HeatmapCell[] = [];
  payload.matrix.categories.forEach((row, i) => {
    payload.matrix.categories.forEach((col, j) => {
      cells.push({ row, col, count: counts[i][j], intensity: counts[i][j] / max });
    });
  });
  return {
    restricted: payload.restricted,
    categories: payload.matrix.categories,
    counts,
    cells,
    n: payload.matrix.n,
    onlyA: payload.matrix.only_a,
    onlyB: payload.matrix.only_b,
    kappa: payload.kappa,
    partition: payload.partition_agreement,
    notes: payload.notes,
    emptyIntersection: payload.empty_intersection,
  };
}

export function kappaSummaryText(view: AgreementView): string {
  if (view.emptyIntersection) return 'no shared slots';
  if (!view.kappa) return 'kappa unavailable';
  if (view.kappa.degenerate || view.kappa.kappa === null) {
    return 'kappa undefined (single used category)';
  }
  const [lo, hi] = view.kappa.ci95!;
  return `kappa ${view.kappa.kappa.toFixed(4)} (95% CI ${lo.toFixed(4)} to ${hi.toFixed(4)}, n=${view.kappa.n})`;
}

// --- disagreement drill-down ------------------------------------------------------

export interface SlotDisagreement {
  entryId: string;
  slotKey: string;
  form: string;
  codeA: string | null;
  codeB: string | null;
}

/** Slots where the two annotators' committed codes differ (including
 * slots only one of them labeled). Pure comparison for display; all
 * statistics come from the service. */
export function disagreementsFor(
  entriesWithA: EntryPayload[],
  entriesWithB: EntryPayload[],
): SlotDisagreement[] {
  const byIdB = new Map(entriesWithB.map((e) => [e.entry_id, e]));
  const out: SlotDisagreement[] = [];
  for (const entryA of entriesWithA) {
    const entryB = byIdB.get(entryA.entry_id);
    const codesA = entryA.codes ?? {};
    const codesB = entryB?.codes ?? {};
    const slotKeys = new Set([...Object.keys(codesA), ...Object.keys(codesB)]);
    for (const slotKey of [...slotKeys].sort()) {
      const a = codesA[slotKey] ?? null;
      const b = codesB[slotKey] ?? null;
      if (a !== b) {
        const [language, index] = slotKey.split(':');
        const form =
          entryA.translations[language]?.[Number(index)]?.form ?? '?';
        out.push({ entryId: entryA.entry_id, slotKey, form, codeA: a, codeB: b });
      }
    }
  }
  return out;
}
