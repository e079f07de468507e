// Profile phase: attribute form plus theme picker. Submits the creation
// request; 400 field paths render inline next to the offending input.

import { createPersona, getThemes, ServiceError } from "../api.js";
import { SessionStore } from "../state.js";
import { toastError } from "../toast.js";

const FIELDS = [
  { key: "name", label: "Name", type: "text", placeholder: "Emily" },
  { key: "age", label: "Age", type: "number", placeholder: "34" },
  { key: "occupation", label: "Occupation", type: "text", placeholder: "School assistant" },
  {
    key: "medicalCondition",
    label: "Medical condition",
    type: "text",
    placeholder: "Down Syndrome",
  },
] as const;

type FieldKey = (typeof FIELDS)[number]["key"];

// maps service field paths (profile.age, profile.Medical Condition) to inputs
const FIELD_PATHS: Record<string, FieldKey> = {
  "profile.name": "name",
  "profile.age": "age",
  "profile.occupation": "occupation",
  "profile.Medical Condition": "medicalCondition",
  "profile.medical_condition": "medicalCondition",
};

export function renderProfilePhase(container: HTMLElement, store: SessionStore): void {
  const doc = container.ownerDocument;
  const state = store.get();
  container.innerHTML = "";

  const heading = doc.createElement("h2");
  heading.textContent = "Profile phase";
  const blurb = doc.createElement("p");
  blurb.className = "phase-blurb";
  blurb.textContent =
    "Set the persona's attributes and pick the life theme the conversation should stay grounded in.";
  container.append(heading, blurb);

  const form = doc.createElement("form");
  form.className = "profile-form";
  form.setAttribute("data-testid", "profile-form");

  const inputs = new Map<FieldKey, HTMLInputElement>();
  const errors = new Map<FieldKey, HTMLElement>();

  for (const field of FIELDS) {
    const row = doc.createElement("label");
    row.className = "form-row";
    const caption = doc.createElement("span");
    caption.textContent = field.label;
    const input = doc.createElement("input");
    input.type = field.type;
    input.placeholder = field.placeholder;
    input.value = state.draft[field.key];
    input.setAttribute("data-testid", `input-${field.key}`);
    input.addEventListener("input", () => {
      store.get().draft[field.key] = input.value;
    });
    const error = doc.createElement("small");
    error.className = "field-error";
    error.setAttribute("data-testid", `error-${field.key}`);
    row.append(caption, input, error);
    form.appendChild(row);
    inputs.set(field.key, input);
    errors.set(field.key, error);
  }

  const themeRow = doc.createElement("label");
  themeRow.className = "form-row";
  const themeCaption = doc.createElement("span");
  themeCaption.textContent = "Theme";
  const themeSelect = doc.createElement("select");
  themeSelect.setAttribute("data-testid", "theme-select");
  const themeError = doc.createElement("small");
  themeError.className = "field-error";
  themeRow.append(themeCaption, themeSelect, themeError);
  form.appendChild(themeRow);

  const placeholder = doc.createElement("option");
  placeholder.value = "";
  placeholder.textContent = "Choose a theme…";
  themeSelect.appendChild(placeholder);

  const fillThemes = (themes: string[]) => {
    for (const theme of themes) {
      const option = doc.createElement("option");
      option.value = theme;
      option.textContent = theme;
      themeSelect.appendChild(option);
    }
    themeSelect.value = store.get().draft.theme;
  };
  if (state.themes.length) {
    fillThemes(state.themes);
  } else {
    getThemes()
      .then((themes) => {
        store.get().themes = themes;
        fillThemes(themes);
      })
      .catch((error) => toastError(doc, error));
  }
  themeSelect.addEventListener("change", () => {
    store.get().draft.theme = themeSelect.value;
  });

  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.className = "primary";
  submit.textContent = "Create persona";
  submit.setAttribute("data-testid", "create-persona");
  form.appendChild(submit);

  const clearErrors = () => {
    for (const el of errors.values()) el.textContent = "";
    themeError.textContent = "";
  };

  const showFieldError = (field: string | null, message: string) => {
    const key = field ? FIELD_PATHS[field] : undefined;
    if (key) {
      errors.get(key)!.textContent = message;
    } else if (field === "theme") {
      themeError.textContent = message;
    } else {
      toastError(doc, new Error(message));
    }
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    clearErrors();
    const draft = store.get().draft;
    // client-side guard: no request leaves with a blank required field
    let blocked = false;
    for (const field of FIELDS) {
      if (!draft[field.key].trim()) {
        errors.get(field.key)!.textContent = "Required";
        blocked = true;
      }
    }
    if (!draft.theme) {
      themeError.textContent = "Pick a theme";
      blocked = true;
    }
    if (blocked) return;

    submit.disabled = true;
    createPersona(draft.theme, {
      name: draft.name.trim(),
      age: Number(draft.age),
      occupation: draft.occupation.trim(),
      medicalCondition: draft.medicalCondition.trim(),
    })
      .then((created) => {
        store.set({
          personaId: created.persona_id,
          personaName: draft.name.trim(),
          description: created.description,
          greeting: created.assistant_message,
          selectedAbilities: [],
          conversationId: null,
        });
        store.goTo("ability");
      })
      .catch((error) => {
        if (error instanceof ServiceError && error.status === 400) {
          showFieldError(error.field, error.message);
        } else {
          toastError(doc, error);
        }
      })
      .finally(() => {
        submit.disabled = false;
      });
  });

  container.appendChild(form);

  if (state.description) {
    const card = doc.createElement("div");
    card.className = "description-card";
    card.setAttribute("data-testid", "persona-description");
    card.textContent = state.description;
    container.appendChild(card);
  }
}
