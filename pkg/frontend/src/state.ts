/** The only state the console keeps across reloads: server URL and token.
 * Every view rebuilds from GET endpoints alone. */

export interface Settings {
  url: string;
  token: string;
}

const STORAGE_KEY = "risklab-console-settings";

const hasStorage = typeof localStorage !== "undefined";

export function loadSettings(): Settings {
  if (hasStorage) {
    const raw = localStorage.getItem(STORAGE_KEY);
    if (raw) {
      try {
        const parsed = JSON.parse(raw) as Partial<Settings>;
        return { url: parsed.url ?? "", token: parsed.token ?? "" };
      } catch {
        // corrupted settings fall through to defaults
      }
    }
  }
  return { url: "http://127.0.0.1:8080", token: "" };
}

export function saveSettings(settings: Settings): void {
  if (hasStorage) {
    localStorage.setItem(STORAGE_KEY, JSON.stringify(settings));
  }
}
