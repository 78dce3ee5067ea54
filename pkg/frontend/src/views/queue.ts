/** Candidate review queue: highlighted sentences, tag chips, accept/reject
 * controls with optimistic removal rolled back on server rejection. */

import { ApiClient, ApiError } from "../api.js";
import { CATEGORY_COLORS } from "../colors.js";
import { segmentSentence } from "../highlight.js";
import { toast } from "../toast.js";
import type { QueueItem, Verdict } from "../types.js";

export interface QueueCallbacks {
  onDecision: () => void;
}

function renderSentence(item: QueueItem): HTMLElement {
  const p = document.createElement("p");
  p.className = "sentence";
  for (const segment of segmentSentence(item.event.sentence, item.matches)) {
    if (segment.highlighted) {
      const mark = document.createElement("mark");
      mark.textContent = segment.text;
      mark.title = `keyword root: ${segment.roots.join(", ")}`;
      p.appendChild(mark);
    } else {
      p.appendChild(document.createTextNode(segment.text));
    }
  }
  return p;
}

function renderItem(item: QueueItem, client: ApiClient, callbacks: QueueCallbacks): HTMLElement {
  const card = document.createElement("article");
  card.className = "card queue-item";
  card.dataset.event = String(item.event.id);
  card.dataset.tag = item.tag;

  const meta = document.createElement("div");
  meta.className = "meta";
  meta.textContent = `event ${item.event.id} · ${item.event.date}` +
    (item.event.story ? ` · ${item.event.story}` : "");
  card.appendChild(meta);
  card.appendChild(renderSentence(item));

  const chip = document.createElement("span");
  chip.className = "chip";
  chip.style.backgroundColor = CATEGORY_COLORS[item.category];
  chip.textContent = `${item.risk}. ${item.risk_name} — ${item.tag}`;
  card.appendChild(chip);

  const controls = document.createElement("div");
  controls.className = "controls";
  let inFlight = false;  // client-side de-bounce; the server 409s duplicates anyway

  const decide = async (verdict: Verdict) => {
    if (inFlight) return;
    inFlight = true;
    controls.querySelectorAll("button").forEach((b) => (b.disabled = true));
    card.classList.add("deciding");
    try {
      await client.postDecision({
        event: item.event.id,
        risk: item.risk,
        tag: item.tag,
        verdict,
      });
      card.remove();
      callbacks.onDecision();
    } catch (err) {
      // roll the optimistic state back and surface the failure
      card.classList.remove("deciding");
      controls.querySelectorAll("button").forEach((b) => (b.disabled = false));
      inFlight = false;
      const detail = err instanceof ApiError ? err.detail : String(err);
      toast(`decision failed: ${detail}`, "error");
    }
  };

  const accept = document.createElement("button");
  accept.textContent = "Accept";
  accept.className = "accept";
  accept.addEventListener("click", () => void decide("accepted"));
  const reject = document.createElement("button");
  reject.textContent = "Reject";
  reject.className = "reject";
  reject.addEventListener("click", () => void decide("rejected"));
  controls.append(accept, reject);
  card.appendChild(controls);
  return card;
}

export async function renderQueue(
  container: HTMLElement,
  client: ApiClient,
  callbacks: QueueCallbacks,
): Promise<void> {
  container.replaceChildren();
  const response = await client.queue("pending");
  const stats = document.createElement("p");
  stats.className = "panel-stats";
  stats.textContent =
    `${response.stats.candidates} candidate / ${response.stats.filtered} filtered of ` +
    `${response.stats.events} events (filter rate ` +
    `${(response.stats.filter_rate * 100).toFixed(1)}%) · ` +
    `${response.items.length} items awaiting a verdict`;
  container.appendChild(stats);

  if (response.items.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "Queue is empty: every candidate item has a verdict.";
    container.appendChild(empty);
    return;
  }
  for (const item of response.items) {
    container.appendChild(renderItem(item, client, callbacks));
  }
}
