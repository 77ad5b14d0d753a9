// Contract tests against the real annotation service: spawn the backend,
// drive the same modules the browser uses, and pin that the dashboard
// shows service payload fields byte-for-byte and that keyboard-only
// annotation persists.

import assert from 'node:assert/strict';
import { after, before, test } from 'node:test';
import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { createServer } from 'node:net';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { ServiceClient } from '../src/api.js';
import { applyKeystroke, emptyStaged } from '../src/codes.js';
import {
  focusedSlot,
  isEntryComplete,
  keystroke,
  startSession,
  submitStaged,
} from '../src/session.js';
import { buildAgreementView, buildEntryView } from '../src/views.js';

const PYTHON = process.env.PYTHON ?? 'python3';

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, '127.0.0.1', () => {
      const address = server.address();
      if (address && typeof address === 'object') {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error('no port'));
      }
    });
  });
}

async function waitForService(base: string, deadlineMs = 20000): Promise<void> {
  const start = Date.now();
  while (Date.now() - start < deadlineMs) {
    try {
      const response = await fetch(`${base}/datasets`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error(`service at ${base} did not come up`);
}

let proc: ChildProcess;
let base: string;
let client: ServiceClient;

before(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'turklex-ui-'));
  const seed = spawnSync(
    PYTHON,
    [
      '-c',
      `
import sys, pathlib
from importlib import resources
from turklex import fixtures
from turklex.codec import serialize_annotations, serialize_dataset

root = pathlib.Path(sys.argv[1])
(root / "examples.tsv").write_text(
    (resources.files("turklex") / "data" / "examples.tsv").read_text("utf-8"),
    encoding="utf-8",
)
(root / "pilot.tsv").write_text(
    serialize_dataset(fixtures.pilot_dataset()), encoding="utf-8"
)
logs = root / "logs" / "pilot"
logs.mkdir(parents=True)
a, b = fixtures.pilot_paired_logs()
(logs / "ann1.jsonl").write_text(serialize_annotations(a), encoding="utf-8")
(logs / "ann2.jsonl").write_text(serialize_annotations(b), encoding="utf-8")
`,
      dataDir,
    ],
    { encoding: 'utf-8' },
  );
  assert.equal(seed.status, 0, `seeding failed: ${seed.stderr}`);

  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  proc = spawn(PYTHON, ['-m', 'turklex.cli', 'serve', dataDir, '--port', String(port)], {
    stdio: 'ignore',
  });
  await waitForService(base);
  client = new ServiceClient(base);
});

after(() => {
  proc?.kill('SIGKILL');
});

test('dashboard heatmap and kappa summary are byte-identical to the payload', async () => {
  const raw = await fetch(`${base}/agreement?dataset=pilot&a=ann1&b=ann2&restricted=false`);
  const rawText = await raw.text();
  const payload = JSON.parse(rawText);
  const view = buildAgreementView(payload);

  // the exact byte sequences of the payload fields appear in what the view holds
  assert.ok(rawText.includes(`"counts":${JSON.stringify(view.counts)}`));
  assert.ok(rawText.includes(`"kappa":${JSON.stringify(view.kappa)}`));
  assert.equal(view.n, 392);
  assert.equal(view.counts[0][0], 160);
  assert.deepEqual(
    view.cells.slice(0, 9).map((c) => c.count),
    [160, 8, 2, 0, 0, 3, 10, 6, 1],
  );
  assert.ok(view.notes.length > 0);
  assert.match(view.notes[0], /0\.5927/);
});

test('restricted toggle re-queries the service, never recomputes locally', async () => {
  const full = buildAgreementView(await client.agreement('pilot', 'ann1', 'ann2', false));
  const restricted = buildAgreementView(await client.agreement('pilot', 'ann1', 'ann2', true));
  assert.equal(full.categories.length, 9);
  assert.equal(restricted.categories.length, 5);
  assert.equal(restricted.n, 303);
  assert.deepEqual(restricted.categories, ['T', 'A', 'P', 'R', 'F']);
  assert.match(restricted.notes[0], /0\.9216/);
  // same fixture numbers the backend reports; the view derived nothing new
  assert.equal(restricted.kappa!.p_o_exact, '284/303');
});

test('keyboard-only annotation of the chair entry persists all 8 codes', async () => {
  const page = await client.entries('examples', { annotator: 'kb', pageSize: 100 });
  const chair = page.entries.find((e) => e.entry_id === 'chair');
  assert.ok(chair);
  const view = buildEntryView(chair!);
  let session = startSession('examples', 'kb', view);

  const codes: Record<string, string> = {
    'az:0': '1R', 'kk:0': '2T', 'ky:0': '2T', 'tt:0': '2T',
    'tr:0': '3A', 'tk:0': '1R', 'ug:0': '2T', 'uz:0': '4A',
  };
  for (let i = 0; i < 8; i++) {
    const code = codes[focusedSlot(session).slotKey];
    session = keystroke(session, code[0]);
    session = keystroke(session, code[1].toLowerCase()); // no Shift needed
    const outcome = await submitStaged(session, client);
    assert.ok(outcome.accepted, JSON.stringify(outcome.diagnostics));
    session = outcome.session;
    if (i < 7) session = keystroke(session, 'Tab');
  }
  assert.ok(isEntryComplete(session));

  // the server, not the session, is the source of truth after a reload
  const reloaded = await client.entries('examples', { annotator: 'kb', pageSize: 100 });
  const persisted = reloaded.entries.find((e) => e.entry_id === 'chair')!;
  assert.deepEqual(persisted.codes, codes);
  assert.equal(persisted.completed_by['kb'], true);

  const progress = await client.progress('examples', 'kb');
  assert.equal(progress.completed, 1);
});

test('inline diagnostics match the backend text for the same bad code', async () => {
  let staged = emptyStaged();
  staged = applyKeystroke(staged, '1');
  staged = applyKeystroke(staged, 'Z');
  const uiMessage = staged.error!.message;

  const response = await fetch(`${base}/annotations`, {
    method: 'PUT',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({
      dataset_id: 'examples', annotator_id: 'kb', entry_id: 'chair',
      language: 'az', lexeme_index: 0, code: '1Z',
    }),
  });
  assert.equal(response.status, 422);
  const body = await response.json();
  assert.equal(body.diagnostics[0].message, uiMessage);
});

test('suggestion endpoint prefills and persists nothing', async () => {
  const suggestion = await client.suggest('examples', 'one', 0.6);
  assert.equal(Object.keys(suggestion.classes).length, 8);
  assert.equal(new Set(Object.values(suggestion.classes)).size, 1); // one block
  const progress = await client.progress('examples', 'nobody');
  assert.equal(progress.completed, 0);
});
