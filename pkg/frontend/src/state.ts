// Session store for the three-phase workbench. Phase gating lives here so
// it is testable without a DOM: Ability needs a chosen theme, Interaction
// needs a created persona.

export type Phase = "profile" | "ability" | "interaction";
export type View = "workbench" | "library";

export interface DraftProfile {
  name: string;
  age: string;
  occupation: string;
  medicalCondition: string;
  theme: string;
}

export interface SessionState {
  view: View;
  phase: Phase;
  themes: string[];
  draft: DraftProfile;
  personaId: string | null;
  personaName: string;
  description: string;
  greeting: string;
  selectedAbilities: string[];
  conversationId: string | null;
  chatPending: boolean;
  showPhaseFlipBanner: boolean;
}

export const PHASES: readonly Phase[] = ["profile", "ability", "interaction"];

export function initialState(): SessionState {
  return {
    view: "workbench",
    phase: "profile",
    themes: [],
    draft: { name: "", age: "", occupation: "", medicalCondition: "", theme: "" },
    personaId: null,
    personaName: "",
    description: "",
    greeting: "",
    selectedAbilities: [],
    conversationId: null,
    chatPending: false,
    showPhaseFlipBanner: false,
  };
}

export function canEnter(state: SessionState, phase: Phase): boolean {
  if (phase === "ability") return state.draft.theme !== "";
  if (phase === "interaction") return state.personaId !== null;
  return true;
}

type Listener = (state: SessionState) => void;

export class SessionStore {
  private state: SessionState;
  private listeners = new Set<Listener>();

  constructor(state: SessionState = initialState()) {
    this.state = state;
  }

  get(): SessionState {
    return this.state;
  }

  set(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  /** Move to a phase; refused (returns false) when its gate is closed. */
  goTo(phase: Phase): boolean {
    if (!canEnter(this.state, phase)) return false;
    const flipping = this.state.phase === "ability" && phase === "interaction";
    this.set({ phase, showPhaseFlipBanner: flipping || this.state.showPhaseFlipBanner });
    return true;
  }
}
