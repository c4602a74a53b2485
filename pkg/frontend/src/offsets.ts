/**
 * Code-point offset arithmetic.
 *
 * The service's canonical schema indexes strings by Unicode code points,
 * while DOM selections and JavaScript string indexing are UTF-16. These
 * helpers convert between the two and implement word-boundary snapping
 * for span selection.
 */

const WORD_CHAR = /[\p{L}\p{N}_'’]/u;

export function codePointLength(s: string): number {
  let n = 0;
  for (const _ of s) n += 1;
  return n;
}

/** UTF-16 index of the code point at `cpIndex` (clamped to the string end). */
export function codePointToUtf16(s: string, cpIndex: number): number {
  let cp = 0;
  let utf16 = 0;
  for (const ch of s) {
    if (cp >= cpIndex) return utf16;
    cp += 1;
    utf16 += ch.length;
  }
  return s.length;
}

/** Code-point index of the UTF-16 offset (must not split a surrogate pair). */
export function utf16ToCodePoint(s: string, utf16Index: number): number {
  let cp = 0;
  let utf16 = 0;
  for (const ch of s) {
    if (utf16 >= utf16Index) return cp;
    cp += 1;
    utf16 += ch.length;
  }
  return cp;
}

export function sliceByCodePoints(s: string, start: number, end: number): string {
  return s.slice(codePointToUtf16(s, start), codePointToUtf16(s, end));
}

function charAt(chars: string[], i: number): string {
  return chars[i] ?? "";
}

/**
 * Snap a code-point span to word boundaries: trims whitespace, then grows
 * both ends to cover any partially selected word. Returns the span
 * unchanged if it is empty after trimming.
 */
export function snapToWordBoundaries(s: string, start: number, end: number): [number, number] {
  const chars = [...s];
  let a = Math.max(0, Math.min(start, chars.length));
  let b = Math.max(a, Math.min(end, chars.length));
  while (a < b && charAt(chars, a).trim() === "") a += 1;
  while (b > a && charAt(chars, b - 1).trim() === "") b -= 1;
  if (a >= b) return [start, end];
  while (a > 0 && WORD_CHAR.test(charAt(chars, a - 1)) && WORD_CHAR.test(charAt(chars, a))) a -= 1;
  while (b < chars.length && WORD_CHAR.test(charAt(chars, b)) && WORD_CHAR.test(charAt(chars, b - 1))) b += 1;
  return [a, b];
}
