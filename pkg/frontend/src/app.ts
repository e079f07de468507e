// Root of the workbench: phase navigation with gating, view switching.

import { PHASES, Phase, SessionStore, canEnter } from "./state.js";
import { renderAbilityPhase } from "./views/ability.js";
import { renderInteractionPhase } from "./views/interaction.js";
import { renderLibrary } from "./views/library.js";
import { renderProfilePhase } from "./views/profile.js";

const PHASE_LABELS: Record<Phase, string> = {
  profile: "1. Profile",
  ability: "2. Abilities",
  interaction: "3. Interaction",
};

export function mountApp(root: HTMLElement, store = new SessionStore()): SessionStore {
  const doc = root.ownerDocument;
  root.innerHTML = "";
  root.className = "workbench-root";

  const nav = doc.createElement("nav");
  nav.className = "phase-nav";
  nav.setAttribute("data-testid", "phase-nav");
  const content = doc.createElement("main");
  content.className = "phase-content";
  content.setAttribute("data-testid", "phase-content");
  root.append(nav, content);

  let lastKey = "";

  const render = () => {
    const state = store.get();
    const key = `${state.view}:${state.phase}`;

    nav.innerHTML = "";
    for (const phase of PHASES) {
      const button = doc.createElement("button");
      button.textContent = PHASE_LABELS[phase];
      button.setAttribute("data-testid", `nav-${phase}`);
      button.disabled = !canEnter(state, phase);
      if (state.view === "workbench" && state.phase === phase) {
        button.classList.add("active");
      }
      button.addEventListener("click", () => {
        store.set({ view: "workbench" });
        store.goTo(phase);
      });
      nav.appendChild(button);
    }
    const libraryButton = doc.createElement("button");
    libraryButton.textContent = "Library";
    libraryButton.setAttribute("data-testid", "nav-library");
    if (state.view === "library") libraryButton.classList.add("active");
    libraryButton.addEventListener("click", () => store.set({ view: "library" }));
    nav.appendChild(libraryButton);

    if (key === lastKey) return; // content re-renders only on view/phase moves
    lastKey = key;
    if (state.view === "library") {
      renderLibrary(content, store);
    } else if (state.phase === "profile") {
      renderProfilePhase(content, store);
    } else if (state.phase === "ability") {
      renderAbilityPhase(content, store);
    } else {
      renderInteractionPhase(content, store);
    }
  };

  render();
  store.subscribe(render);
  return store;
}
