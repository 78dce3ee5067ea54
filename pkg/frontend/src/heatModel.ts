/** Parse the service's heat-map CSV and group it for rendering, one block
 * per category with countries ordered by score. */

import { CATEGORIES } from "./colors.js";
import type { Category } from "./types.js";

export interface HeatRow {
  category: Category;
  country: string;
  count: number;
  score: number;
}

/** Minimal CSV field splitter; handles the double-quoted fields the
 * service may emit for names containing commas. */
export function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let current = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') {
        current += '"';
        i++;
      } else if (ch === '"') {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      fields.push(current);
      current = "";
    } else {
      current += ch;
    }
  }
  fields.push(current);
  return fields;
}

export function parseHeatCsv(text: string): HeatRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) return [];
  const header = splitCsvLine(lines[0]);
  if (header.join(",") !== "category,country,count,score") {
    throw new Error(`unexpected heat-map header: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const [category, country, count, score] = splitCsvLine(line);
    return {
      category: category as Category,
      country,
      count: Number(count),
      score: Number(score),
    };
  });
}

export function groupByCategory(rows: HeatRow[]): Map<Category, HeatRow[]> {
  const groups = new Map<Category, HeatRow[]>();
  for (const category of CATEGORIES) {
    const members = rows
      .filter((row) => row.category === category)
      .sort((a, b) => b.score - a.score || a.country.localeCompare(b.country));
    if (members.length) groups.set(category, members);
  }
  return groups;
}
