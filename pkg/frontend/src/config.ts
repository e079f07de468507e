// Service base URL, configurable at build or run time:
// window.__API_BASE__ (inline script) > localStorage > same-origin default.

declare global {
  // eslint-disable-next-line no-var
  var __API_BASE__: string | undefined;
}

const DEFAULT_BASE = "http://127.0.0.1:8000";

export function apiBase(): string {
  if (typeof globalThis.__API_BASE__ === "string" && globalThis.__API_BASE__) {
    return globalThis.__API_BASE__.replace(/\/$/, "");
  }
  try {
    const stored = globalThis.localStorage?.getItem("persona_workbench_api_base");
    if (stored) return stored.replace(/\/$/, "");
  } catch {
    // no storage in this environment
  }
  return DEFAULT_BASE;
}

export function setApiBase(url: string): void {
  globalThis.__API_BASE__ = url;
}
