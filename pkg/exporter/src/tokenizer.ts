/**
 * Deterministic subword segmentation.
 *
 * Words are split into greedy chunks of at most CHUNK characters, so the
 * subword sequence of a sentence is a pure function of its tokens and the
 * word-index map always reconstructs the original word count.
 */

export const CHUNK = 4;

export interface SubwordToken {
  wordIndex: number;
  text: string;
}

export function segmentWord(word: string): string[] {
  const chars = Array.from(word); // code points, not UTF-16 units
  const pieces: string[] = [];
  for (let i = 0; i < chars.length; i += CHUNK) {
    pieces.push(chars.slice(i, i + CHUNK).join(""));
  }
  return pieces;
}

export function segmentSentence(words: string[]): SubwordToken[] {
  const out: SubwordToken[] = [];
  words.forEach((word, wordIndex) => {
    for (const text of segmentWord(word)) {
      out.push({ wordIndex, text });
    }
  });
  return out;
}
