// Ability phase: cards per theme; hovering a driver or blocker reveals its
// first-person story; multi-select is recorded on the persona before the
// Interaction phase. Proceeding with zero selections is allowed.

import { AbilityEntry, getAbilities, selectAbilities } from "../api.js";
import { SessionStore } from "../state.js";
import { toastError } from "../toast.js";

function factorChip(
  doc: Document,
  kind: "driver" | "blocker",
  name: string,
  story: string,
): HTMLElement {
  const chip = doc.createElement("span");
  chip.className = `factor ${kind}`;
  chip.textContent = name;
  chip.title = story; // hover story, plus an explicit card for tests/touch
  const hover = doc.createElement("span");
  hover.className = "factor-story";
  hover.setAttribute("role", "tooltip");
  hover.textContent = story;
  chip.appendChild(hover);
  return chip;
}

export function renderAbilityPhase(container: HTMLElement, store: SessionStore): void {
  const doc = container.ownerDocument;
  const state = store.get();
  container.innerHTML = "";

  const heading = doc.createElement("h2");
  heading.textContent = `Ability phase — ${state.draft.theme}`;
  const blurb = doc.createElement("p");
  blurb.className = "phase-blurb";
  blurb.textContent =
    "Pick the abilities this persona leans on. Hover a driver or blocker to read the story behind it.";
  container.append(heading, blurb);

  const grid = doc.createElement("div");
  grid.className = "ability-grid";
  grid.setAttribute("data-testid", "ability-grid");
  container.appendChild(grid);

  const selected = new Set(state.selectedAbilities);

  const renderCards = (entries: AbilityEntry[]) => {
    for (const entry of entries) {
      const card = doc.createElement("div");
      card.className = "ability-card";
      card.setAttribute("data-testid", `ability-${entry.name}`);
      if (selected.has(entry.name)) card.classList.add("selected");

      const title = doc.createElement("h3");
      title.textContent = entry.name;
      const description = doc.createElement("p");
      description.className = "ability-description";
      description.textContent = entry.description;

      const factors = doc.createElement("div");
      factors.className = "factor-list";
      for (const driver of entry.drivers) {
        factors.appendChild(factorChip(doc, "driver", driver.name, driver.story));
      }
      for (const blocker of entry.blockers) {
        factors.appendChild(factorChip(doc, "blocker", blocker.name, blocker.story));
      }

      const toggle = doc.createElement("button");
      toggle.className = "ability-toggle";
      toggle.setAttribute("data-testid", `toggle-${entry.name}`);
      toggle.textContent = selected.has(entry.name) ? "Selected ✓" : "Select";
      toggle.addEventListener("click", () => {
        if (selected.has(entry.name)) {
          selected.delete(entry.name);
          card.classList.remove("selected");
          toggle.textContent = "Select";
        } else {
          selected.add(entry.name);
          card.classList.add("selected");
          toggle.textContent = "Selected ✓";
        }
      });

      card.append(title, description, factors, toggle);
      grid.appendChild(card);
    }
  };

  getAbilities(state.draft.theme)
    .then(renderCards)
    .catch((error) => toastError(doc, error));

  const footer = doc.createElement("div");
  footer.className = "phase-footer";
  const hint = doc.createElement("span");
  hint.className = "hint";
  hint.textContent = "Selecting nothing is fine; you can come back later.";
  const proceed = doc.createElement("button");
  proceed.className = "primary";
  proceed.textContent = "Save selection and start interviewing";
  proceed.setAttribute("data-testid", "proceed-interaction");
  proceed.addEventListener("click", () => {
    const personaId = store.get().personaId;
    if (!personaId) return;
    proceed.disabled = true;
    selectAbilities(personaId, state.draft.theme, [...selected])
      .then(() => {
        store.set({ selectedAbilities: [...selected] });
        store.goTo("interaction");
      })
      .catch((error) => toastError(doc, error))
      .finally(() => {
        proceed.disabled = false;
      });
  });
  footer.append(hint, proceed);
  container.appendChild(footer);
}
