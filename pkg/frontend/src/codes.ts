// Two-keystroke staging of an annotation code, mirroring the backend's
// code grammar: one class digit 1-8, one uppercase etymology letter.
// Diagnostic messages use the exact templates the backend emits, so the
// inline error for "1Z" reads the same as a rejected submission would.
//
// Letter keys are uppercased at the staging boundary (annotators should
// not need Shift); validity is judged after uppercasing, exactly like
// the backend judges the stored two-character code.

export const CLASS_DIGITS = '12345678';
export const ETYMOLOGY_LETTERS = 'TAPRFEIGCQXVN';

// code is one of the grammar reasons (ClassOutOfRange,
// UnknownEtymologyLetter, BadLength) for staged input, or whatever the
// service rejected a submission with (e.g. ClassExceedsSlots).
export interface StagedError {
  code: string;
  message: string;
}

export interface Staged {
  text: string; // 0, 1, or 2 characters
  error: StagedError | null;
}

export function emptyStaged(): Staged {
  return { text: '', error: null };
}

export function classOutOfRangeMessage(text: string): string {
  return `first character must be a class digit 1-8: '${text}'`;
}

export function unknownLetterMessage(letter: string, text: string): string {
  return `unknown etymology letter '${letter}' in '${text}'`;
}

export function badLengthMessage(text: string): string {
  return `annotation code must be exactly 2 characters: '${text}'`;
}

/** True when the key is a single printable character (a candidate code
 * character rather than a control key). */
export function isCharacterKey(key: string): boolean {
  return key.length === 1;
}

/** Apply one keystroke to the staged code. Invalid characters leave the
 * staged text unchanged and set an inline error; Backspace edits. */
export function applyKeystroke(staged: Staged, key: string): Staged {
  if (key === 'Backspace') {
    return { text: staged.text.slice(0, -1), error: null };
  }
  if (!isCharacterKey(key)) {
    return staged;
  }
  if (staged.text.length === 0) {
    if (CLASS_DIGITS.includes(key)) {
      return { text: key, error: null };
    }
    return { text: '', error: { code: 'ClassOutOfRange', message: classOutOfRangeMessage(key) } };
  }
  if (staged.text.length === 1) {
    const letter = /^[a-z]$/.test(key) ? key.toUpperCase() : key;
    if (ETYMOLOGY_LETTERS.includes(letter) && /^[A-Za-z]$/.test(letter)) {
      return { text: staged.text + letter, error: null };
    }
    return {
      text: staged.text,
      error: {
        code: 'UnknownEtymologyLetter',
        message: unknownLetterMessage(letter, staged.text + letter),
      },
    };
  }
  // already complete: extra character keys are ignored
  return staged;
}

export function isComplete(staged: Staged): boolean {
  return staged.text.length === 2;
}

/** Validate a full two-character code the way the backend parses one.
 * Returns null when valid. */
export function validateCode(text: string): StagedError | null {
  if (text.length !== 2) {
    return { code: 'BadLength', message: badLengthMessage(text) };
  }
  if (!CLASS_DIGITS.includes(text[0])) {
    return { code: 'ClassOutOfRange', message: classOutOfRangeMessage(text) };
  }
  if (!ETYMOLOGY_LETTERS.includes(text[1])) {
    return { code: 'UnknownEtymologyLetter', message: unknownLetterMessage(text[1], text) };
  }
  return null;
}

export function cognateClassOf(code: string): number {
  return Number(code[0]);
}
