import assert from 'node:assert/strict';
import { test } from 'node:test';

import {
  applyKeystroke,
  emptyStaged,
  isComplete,
  validateCode,
} from '../src/codes.js';

test('two keystrokes stage a code', () => {
  let staged = emptyStaged();
  staged = applyKeystroke(staged, '1');
  assert.equal(staged.text, '1');
  assert.equal(staged.error, null);
  staged = applyKeystroke(staged, 'R');
  assert.equal(staged.text, '1R');
  assert.ok(isComplete(staged));
});

test('lowercase letters are uppercased at the keyboard boundary', () => {
  let staged = applyKeystroke(emptyStaged(), '2');
  staged = applyKeystroke(staged, 't');
  assert.equal(staged.text, '2T');
});

test('zero is out of range and focus stays', () => {
  const staged = applyKeystroke(emptyStaged(), '0');
  assert.equal(staged.text, '');
  assert.equal(staged.error?.code, 'ClassOutOfRange');
  assert.equal(staged.error?.message, "first character must be a class digit 1-8: '0'");
});

test('nine is out of range', () => {
  const staged = applyKeystroke(emptyStaged(), '9');
  assert.equal(staged.error?.code, 'ClassOutOfRange');
});

test('unknown letter keeps the digit and reports inline', () => {
  let staged = applyKeystroke(emptyStaged(), '1');
  staged = applyKeystroke(staged, 'Z');
  assert.equal(staged.text, '1');
  assert.equal(staged.error?.code, 'UnknownEtymologyLetter');
  assert.equal(staged.error?.message, "unknown etymology letter 'Z' in '1Z'");
});

test('digit in letter position is an unknown letter, like the backend', () => {
  let staged = applyKeystroke(emptyStaged(), '1');
  staged = applyKeystroke(staged, '3');
  assert.equal(staged.error?.code, 'UnknownEtymologyLetter');
  assert.equal(staged.error?.message, "unknown etymology letter '3' in '13'");
});

test('backspace edits and clears the error', () => {
  let staged = applyKeystroke(emptyStaged(), '1');
  staged = applyKeystroke(staged, 'Z');
  staged = applyKeystroke(staged, 'Backspace');
  assert.equal(staged.text, '');
  assert.equal(staged.error, null);
  staged = applyKeystroke(staged, '4');
  staged = applyKeystroke(staged, 'A');
  assert.equal(staged.text, '4A');
});

test('extra character keys after completion are ignored', () => {
  let staged = applyKeystroke(emptyStaged(), '1');
  staged = applyKeystroke(staged, 'T');
  staged = applyKeystroke(staged, 'X');
  assert.equal(staged.text, '1T');
});

test('validateCode mirrors the backend grammar', () => {
  assert.equal(validateCode('1R'), null);
  assert.equal(validateCode('8N'), null);
  assert.equal(validateCode('0T')?.code, 'ClassOutOfRange');
  assert.equal(validateCode('1Z')?.code, 'UnknownEtymologyLetter');
  assert.equal(validateCode('1')?.code, 'BadLength');
  assert.equal(validateCode('1RT')?.code, 'BadLength');
  // all 104 valid codes, nothing else in the 2-char space we type
  const letters = 'TAPRFEIGCQXVN';
  let accepted = 0;
  for (let c = 32; c < 127; c++) {
    for (let d = 32; d < 127; d++) {
      const text = String.fromCharCode(c) + String.fromCharCode(d);
      if (validateCode(text) === null) {
        accepted += 1;
        assert.ok('12345678'.includes(text[0]) && letters.includes(text[1]));
      }
    }
  }
  assert.equal(accepted, 104);
});
