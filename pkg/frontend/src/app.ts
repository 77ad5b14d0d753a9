// DOM wiring for the workbench: left pane steps through entries with
// keyboard code entry and suggestion prefills; right pane is the
// two-annotator agreement dashboard. All logic lives in the pure
// modules; this file only renders state and forwards events.

import { ServiceClient, type EntryPayload, type SuggestionPayload } from './api.js';
import {
  EntrySession,
  acceptSuggestedClass,
  focusedSlot,
  keystroke,
  startSession,
  submitStaged,
} from './session.js';
import {
  buildAgreementView,
  buildEntryView,
  disagreementsFor,
  kappaSummaryText,
  type AgreementView,
} from './views.js';

const client = new ServiceClient(
  (window as { TURKLEX_SERVICE_URL?: string }).TURKLEX_SERVICE_URL ?? 'http://127.0.0.1:8057',
);

interface AppState {
  datasetId: string | null;
  annotatorId: string;
  entries: EntryPayload[];
  index: number;
  session: EntrySession | null;
  suggestion: SuggestionPayload | null;
  agreement: AgreementView | null;
  agreementWith: string;
  status: string;
}

const state: AppState = {
  datasetId: null,
  annotatorId: 'ann1',
  entries: [],
  index: 0,
  session: null,
  suggestion: null,
  agreement: null,
  agreementWith: '',
  status: 'loading',
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

async function loadDataset(datasetId: string): Promise<void> {
  state.datasetId = datasetId;
  const page = await client.entries(datasetId, {
    annotator: state.annotatorId,
    pageSize: 500,
  });
  state.entries = page.entries;
  state.index = Math.min(state.index, Math.max(0, page.entries.length - 1));
  await openEntry(state.index);
}

async function openEntry(index: number): Promise<void> {
  state.index = index;
  const entry = state.entries[index];
  if (!entry || !state.datasetId) return;
  try {
    state.suggestion = await client.suggest(state.datasetId, entry.entry_id);
  } catch {
    state.suggestion = null; // suggestion failure degrades to manual entry
  }
  const view = buildEntryView(entry, state.suggestion);
  state.session = startSession(state.datasetId, state.annotatorId, view);
  render();
}

async function refreshAgreement(): Promise<void> {
  if (!state.datasetId || !state.agreementWith) return;
  const payload = await client.agreement(
    state.datasetId,
    state.annotatorId,
    state.agreementWith,
    state.agreement?.restricted ?? false,
  );
  state.agreement = buildAgreementView(payload);
  render();
}

async function toggleRestricted(): Promise<void> {
  // never recomputed locally: the toggle is a fresh query
  if (!state.datasetId || !state.agreementWith || !state.agreement) return;
  const payload = await client.agreement(
    state.datasetId,
    state.annotatorId,
    state.agreementWith,
    !state.agreement.restricted,
  );
  state.agreement = buildAgreementView(payload);
  render();
}

async function onKey(event: KeyboardEvent): Promise<void> {
  if (!state.session) return;
  if (event.key === 'Tab') {
    event.preventDefault();
    state.session = keystroke(state.session, 'Tab');
    render();
    return;
  }
  if (event.key === 'Enter') {
    event.preventDefault();
    const outcome = await submitStaged(state.session, client);
    state.session = outcome.session;
    if (outcome.accepted) state.status = `saved ${focusedSlot(state.session).slotKey}`;
    render();
    return;
  }
  if (event.key === ' ') {
    event.preventDefault();
    state.session = acceptSuggestedClass(state.session);
    render();
    return;
  }
  if (event.key.length === 1 || event.key === 'Backspace') {
    event.preventDefault();
    state.session = keystroke(state.session, event.key);
    render();
  }
}

function render(): void {
  const root = document.getElementById('app');
  if (!root) return;
  root.replaceChildren();
  const entry = state.entries[state.index];
  if (!entry || !state.session) {
    root.append(el('p', {}, state.status));
    return;
  }
  const view = buildEntryView(entry, state.suggestion);

  const header = el(
    'div',
    { class: 'header' },
    el('strong', {}, `${entry.entry_id} — “${entry.gloss}”`),
    el('span', {}, ` entry ${state.index + 1}/${state.entries.length} · annotator ${state.annotatorId}`),
  );

  const table = el('table', { class: 'entry' });
  const session = state.session;
  view.cells.forEach((cell, i) => {
    const slot = session.slots[i];
    const focused = i === session.focus;
    const codeText = focused && session.staged.text ? session.staged.text : slot.committed ?? '';
    const suggested =
      slot.committed === null && cell.suggestedClass !== null
        ? ` (suggested: ${cell.suggestedClass})`
        : '';
    const row = el(
      'tr',
      { class: focused ? 'focused' : '' },
      el('td', {}, cell.languageName),
      el(
        'td',
        {},
        cell.form,
        cell.transliteration ? el('sup', { class: 'badge' }, 'translit') : '',
      ),
      el(
        'td',
        cell.color ? { style: `background:${cell.color}` } : {},
        codeText + suggested,
      ),
    );
    table.append(row);
  });

  const error = state.session.staged.error;
  const banner = error
    ? el('p', { class: 'error' }, `${error.code}: ${error.message}`)
    : el('p', {}, 'type digit+letter, Enter saves, Tab advances, Space takes the suggested class');

  root.append(header, table, banner);

  if (state.agreement) {
    const agreement = state.agreement;
    const heat = el('table', { class: 'heatmap' });
    const head = el('tr', {}, el('th', {}, 'ann2\\ann1'));
    for (const cat of agreement.categories) head.append(el('th', {}, cat));
    heat.append(head);
    agreement.categories.forEach((row, i) => {
      const tr = el('tr', {}, el('th', {}, row));
      agreement.categories.forEach((_, j) => {
        const cell = agreement.counts[i][j];
        const alpha = agreement.cells[i * agreement.categories.length + j].intensity;
        tr.append(
          el('td', { style: `background:rgba(78,121,167,${alpha.toFixed(3)})` }, String(cell)),
        );
      });
      heat.append(tr);
    });
    root.append(
      el('h3', {}, `agreement${agreement.restricted ? ' (restricted)' : ''}`),
      heat,
      el('p', {}, kappaSummaryText(agreement)),
      ...agreement.notes.map((note) => el('p', { class: 'note' }, `note: ${note}`)),
    );
  }
}

async function start(): Promise<void> {
  const datasets = await client.datasets();
  if (datasets.datasets.length > 0) {
    await loadDataset(datasets.datasets[0].dataset_id);
  }
  document.addEventListener('keydown', (event) => {
    void onKey(event);
  });
  const hooks = window as unknown as Record<string, unknown>;
  hooks.turklexRefreshAgreement = (withAnnotator: string) => {
    state.agreementWith = withAnnotator;
    void refreshAgreement();
  };
  hooks.turklexToggleRestricted = () => void toggleRestricted();
  hooks.turklexOpenEntry = (index: number) => void openEntry(index);
}

if (typeof document !== 'undefined') {
  void start();
}
