/** Learning-loop panel: run an iteration, inspect per-tag keyword
 * proposals with importance bars, promote or dismiss each word. Dismissing
 * every proposal without promoting any ends the loop (the empty-list
 * termination rule), which the panel announces. */

import { ApiClient, ApiError } from "../api.js";
import { CATEGORY_COLORS } from "../colors.js";
import { toast } from "../toast.js";
import type { Category, IterationReport, IterationRow } from "../types.js";

export interface ProposalCallbacks {
  onLexiconGrown: (newlyQueued: number) => void;
}

function categoryOf(risk: number): Category {
  if (risk <= 9) return "economic";
  if (risk <= 14) return "environmental";
  if (risk <= 19) return "geopolitical";
  if (risk <= 25) return "societal";
  return "technological";
}

interface RoundState {
  remaining: number;
  promoted: number;
}

function renderRow(
  row: IterationRow,
  client: ApiClient,
  round: RoundState,
  callbacks: ProposalCallbacks,
  banner: HTMLElement,
): HTMLElement {
  const card = document.createElement("article");
  card.className = "card proposal-card";
  const heading = document.createElement("h3");
  const chip = document.createElement("span");
  chip.className = "chip";
  chip.style.backgroundColor = CATEGORY_COLORS[categoryOf(row.risk)];
  chip.textContent = `${row.risk} · ${row.tag}`;
  heading.append(chip, ` ${row.n_pos}+ / ${row.n_neg}−`);
  card.appendChild(heading);

  const maxImportance = Math.max(...row.proposals.map((w) => row.importances[w] ?? 0), 1e-9);
  const finishWord = (line: HTMLElement) => {
    line.remove();
    round.remaining -= 1;
    if (round.remaining === 0 && round.promoted === 0) {
      banner.hidden = false;
    }
    if (card.querySelectorAll(".proposal-line").length === 0) card.remove();
  };

  for (const word of row.proposals) {
    const line = document.createElement("div");
    line.className = "proposal-line";
    const label = document.createElement("span");
    label.className = "word";
    label.textContent = word;
    const bar = document.createElement("span");
    bar.className = "importance-bar";
    const importance = row.importances[word] ?? 0;
    bar.style.width = `${Math.round(160 * (importance / maxImportance))}px`;
    bar.title = `importance ${importance.toFixed(4)}`;

    const promote = document.createElement("button");
    promote.textContent = "Promote";
    promote.addEventListener("click", () => {
      void (async () => {
        promote.disabled = true;
        try {
          const result = await client.postKeyword({ risk: row.risk, tag: row.tag, root: word });
          round.promoted += 1;
          toast(`"${word}" merged into ${row.tag}; ${result.newly_queued} new queue item(s)`);
          finishWord(line);
          callbacks.onLexiconGrown(result.newly_queued);
        } catch (err) {
          promote.disabled = false;
          const detail = err instanceof ApiError ? err.detail : String(err);
          toast(`promotion failed: ${detail}`, "error");
        }
      })();
    });

    const dismiss = document.createElement("button");
    dismiss.textContent = "Dismiss";
    dismiss.className = "secondary";
    dismiss.addEventListener("click", () => finishWord(line));

    line.append(label, bar, promote, dismiss);
    card.appendChild(line);
  }
  return card;
}

export function renderReport(
  container: HTMLElement,
  report: IterationReport,
  client: ApiClient,
  callbacks: ProposalCallbacks,
): void {
  const banner = document.createElement("div");
  banner.className = "banner";
  banner.hidden = true;
  banner.textContent =
    "No proposals were accepted — the keyword-learning loop terminates here. " +
    "Run another iteration after labeling more events.";
  container.appendChild(banner);

  const summary = document.createElement("p");
  summary.className = "panel-stats";
  const totalWords = report.per_tag.reduce((acc, row) => acc + row.proposals.length, 0);
  summary.textContent =
    `iteration ${report.iteration} (seed ${report.seed}): ${report.per_tag.length} tag(s) ` +
    `trained, ${report.skipped.length} skipped, ${totalWords} keyword proposal(s)`;
  container.appendChild(summary);

  const round: RoundState = { remaining: totalWords, promoted: 0 };
  if (totalWords === 0) banner.hidden = false;

  for (const row of report.per_tag) {
    container.appendChild(renderRow(row, client, round, callbacks, banner));
  }

  if (report.skipped.length) {
    const details = document.createElement("details");
    const summaryLine = document.createElement("summary");
    summaryLine.textContent = `${report.skipped.length} tag(s) skipped for insufficient labels`;
    details.appendChild(summaryLine);
    const list = document.createElement("ul");
    for (const skip of report.skipped) {
      const li = document.createElement("li");
      li.textContent = `${skip.risk} · ${skip.tag}: ${skip.reason}`;
      list.appendChild(li);
    }
    details.appendChild(list);
    container.appendChild(details);
  }
}

export function renderProposalsPanel(
  container: HTMLElement,
  client: ApiClient,
  callbacks: ProposalCallbacks,
): void {
  container.replaceChildren();
  const form = document.createElement("form");
  form.className = "iteration-form";
  const seedInput = document.createElement("input");
  seedInput.type = "number";
  seedInput.value = "0";
  seedInput.name = "seed";
  const run = document.createElement("button");
  run.textContent = "Run iteration";
  const label = document.createElement("label");
  label.append("seed ", seedInput);
  form.append(label, run);
  container.appendChild(form);

  const results = document.createElement("div");
  container.appendChild(results);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      run.disabled = true;
      try {
        const report = await client.postIteration({ seed: Number(seedInput.value) || 0 });
        results.replaceChildren();
        renderReport(results, report, client, callbacks);
      } catch (err) {
        const detail = err instanceof ApiError ? err.detail : String(err);
        toast(`iteration failed: ${detail}`, "error");
      } finally {
        run.disabled = false;
      }
    })();
  });
}
