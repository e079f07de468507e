// Persona library: saved personas, newest first; opening one restores the
// session so the interview can continue where it left off.

import { getPersona, listPersonas } from "../api.js";
import { SessionStore } from "../state.js";
import { toastError } from "../toast.js";

export function renderLibrary(container: HTMLElement, store: SessionStore): void {
  const doc = container.ownerDocument;
  container.innerHTML = "";

  const heading = doc.createElement("h2");
  heading.textContent = "Persona library";
  const blurb = doc.createElement("p");
  blurb.className = "phase-blurb";
  blurb.textContent = "Saved personas, newest first. Open one to keep interviewing it.";
  container.append(heading, blurb);

  const newPersona = doc.createElement("button");
  newPersona.className = "primary";
  newPersona.textContent = "Create a new persona";
  newPersona.setAttribute("data-testid", "library-new-persona");
  newPersona.addEventListener("click", () => {
    store.set({ view: "workbench", phase: "profile" });
  });
  container.appendChild(newPersona);

  const list = doc.createElement("div");
  list.className = "library-list";
  list.setAttribute("data-testid", "library-list");
  container.appendChild(list);

  listPersonas()
    .then((personas) => {
      if (!personas.length) {
        list.textContent = "Nothing saved yet.";
        return;
      }
      for (const summary of personas) {
        const card = doc.createElement("div");
        card.className = "library-card";
        card.setAttribute("data-testid", `library-${summary.persona_id}`);
        const glyph = doc.createElement("span");
        glyph.className = "avatar-glyph";
        glyph.textContent = "◈";
        const title = doc.createElement("h3");
        title.textContent = `${summary.name} · ${summary.theme}`;
        const description = doc.createElement("p");
        description.className = "library-description";
        description.textContent = summary.description;
        const open = doc.createElement("button");
        open.textContent = "Open";
        open.addEventListener("click", () => {
          getPersona(summary.persona_id)
            .then((profile) => {
              store.set({
                view: "workbench",
                personaId: profile.persona_id,
                personaName: profile.name,
                description: profile.description,
                greeting: "",
                selectedAbilities: profile.selected_abilities.map(([, name]) => name),
                conversationId: null,
                draft: {
                  ...store.get().draft,
                  theme: profile.theme,
                  name: profile.name,
                  age: String(profile.age),
                  occupation: profile.occupation,
                  medicalCondition: profile.medical_condition,
                },
              });
              store.goTo("interaction");
            })
            .catch((error) => toastError(doc, error));
        });
        card.append(glyph, title, description, open);
        list.appendChild(card);
      }
    })
    .catch((error) => toastError(doc, error));
}
