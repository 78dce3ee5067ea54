/** Fixed five-category palette (economic blue, environmental green,
 * geopolitical orange, societal red, technological indigo) and the
 * single-hue score ramp used by the heat view. */

import type { Category } from "./types.js";

export const CATEGORY_COLORS: Record<Category, string> = {
  economic: "#1f77b4",
  environmental: "#2e8b57",
  geopolitical: "#ff7f0e",
  societal: "#d62728",
  technological: "#4b0082",
};

export const CATEGORIES: Category[] = [
  "economic",
  "environmental",
  "geopolitical",
  "societal",
  "technological",
];

function hexToRgb(hex: string): [number, number, number] {
  const value = hex.replace("#", "");
  return [
    parseInt(value.slice(0, 2), 16),
    parseInt(value.slice(2, 4), 16),
    parseInt(value.slice(4, 6), 16),
  ];
}

function toHex(channel: number): string {
  return Math.round(channel).toString(16).padStart(2, "0");
}

export function clampScore(score: number): number {
  if (Number.isNaN(score)) return 0;
  return Math.min(1, Math.max(0, score));
}

/** White-to-category-color ramp over a score in [0, 1]. */
export function rampColor(category: Category, score: number): string {
  const t = clampScore(score);
  const [r, g, b] = hexToRgb(CATEGORY_COLORS[category]);
  const mix = (channel: number) => 255 + (channel - 255) * t;
  return `#${toHex(mix(r))}${toHex(mix(g))}${toHex(mix(b))}`;
}

/** Black or white, whichever stays readable on the given ramp color. */
export function textColorOn(background: string): string {
  const [r, g, b] = hexToRgb(background);
  const luminance = 0.299 * r + 0.587 * g + 0.114 * b;
  return luminance < 140 ? "#ffffff" : "#1a1a1a";
}
