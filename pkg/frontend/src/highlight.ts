/** Split a sentence into plain and highlighted segments from the keyword
 * match spans the service reports. Spans are offsets into the same
 * whitespace-normalized sentence the service returns, so they apply to the
 * displayed text directly. */

import type { MatchSpan } from "./types.js";

export interface Segment {
  text: string;
  highlighted: boolean;
  roots: string[];
}

interface Interval {
  start: number;
  end: number;
  roots: string[];
}

function mergeSpans(spans: MatchSpan[], length: number): Interval[] {
  const clipped = spans
    .map((s) => ({
      start: Math.max(0, Math.min(length, s.start)),
      end: Math.max(0, Math.min(length, s.end)),
      roots: [s.root],
    }))
    .filter((s) => s.end > s.start)
    .sort((x, y) => x.start - y.start || x.end - y.end);
  const merged: Interval[] = [];
  for (const span of clipped) {
    const last = merged[merged.length - 1];
    if (last && span.start <= last.end) {
      last.end = Math.max(last.end, span.end);
      for (const root of span.roots) {
        if (!last.roots.includes(root)) last.roots.push(root);
      }
    } else {
      merged.push({ ...span, roots: [...span.roots] });
    }
  }
  return merged;
}

export function segmentSentence(sentence: string, spans: MatchSpan[]): Segment[] {
  const segments: Segment[] = [];
  let cursor = 0;
  for (const span of mergeSpans(spans, sentence.length)) {
    if (span.start > cursor) {
      segments.push({ text: sentence.slice(cursor, span.start), highlighted: false, roots: [] });
    }
    segments.push({
      text: sentence.slice(span.start, span.end),
      highlighted: true,
      roots: span.roots,
    });
    cursor = span.end;
  }
  if (cursor < sentence.length) {
    segments.push({ text: sentence.slice(cursor), highlighted: false, roots: [] });
  }
  return segments;
}
