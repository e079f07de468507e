// Interaction phase: chat window with pre-defined question chips, star/mark
// on the user's own questions, a history sidebar with new-chat, interview
// script export, annotations, and a jump into the persona library.
//
// The transcript is always re-read from the service after a send, so every
// rendered assistant bubble byte-equals the stored service content.

import {
  ConversationDetail,
  annotate,
  getConversation,
  getQuestions,
  getScript,
  listConversations,
  markQuestion,
  sendChat,
} from "../api.js";
import { SessionStore } from "../state.js";
import { showToast, toastError } from "../toast.js";

export function renderInteractionPhase(container: HTMLElement, store: SessionStore): void {
  const doc = container.ownerDocument;
  const state = store.get();
  container.innerHTML = "";
  if (!state.personaId) return;
  const personaId = state.personaId;

  // -- layout -------------------------------------------------------------
  const layout = doc.createElement("div");
  layout.className = "interaction-layout";
  const sidebar = doc.createElement("aside");
  sidebar.className = "sidebar";
  const main = doc.createElement("section");
  main.className = "chat-main";
  layout.append(sidebar, main);
  container.appendChild(layout);

  // -- phase-flip banner ----------------------------------------------------
  if (state.showPhaseFlipBanner) {
    const banner = doc.createElement("div");
    banner.className = "phase-flip-banner";
    banner.setAttribute("data-testid", "phase-flip-banner");
    banner.textContent =
      `Perspective flip: you were imagining yourself as ${state.personaName}; ` +
      `from here on you are interviewing them.`;
    const dismiss = doc.createElement("button");
    dismiss.textContent = "Got it";
    dismiss.addEventListener("click", () => {
      banner.remove();
      store.get().showPhaseFlipBanner = false;
    });
    banner.appendChild(dismiss);
    main.appendChild(banner);
  }

  // -- header ----------------------------------------------------------------
  const header = doc.createElement("header");
  header.className = "chat-header";
  const avatar = doc.createElement("span");
  avatar.className = "avatar-glyph"; // neutral abstract glyph, deliberately not a face
  avatar.textContent = "◈";
  const title = doc.createElement("div");
  const name = doc.createElement("h2");
  name.textContent = state.personaName;
  const abilityEcho = doc.createElement("p");
  abilityEcho.className = "ability-echo";
  abilityEcho.setAttribute("data-testid", "ability-echo");
  abilityEcho.textContent = state.selectedAbilities.length
    ? `Abilities: ${state.selectedAbilities.join(", ")}`
    : "Abilities: none selected";
  title.append(name, abilityEcho);
  header.append(avatar, title);
  main.appendChild(header);

  // -- transcript -------------------------------------------------------------
  const transcript = doc.createElement("div");
  transcript.className = "transcript";
  transcript.setAttribute("data-testid", "transcript");
  main.appendChild(transcript);

  const renderBubble = (
    role: string,
    content: string,
    turnIndex: number | null,
    marked: boolean,
  ) => {
    const row = doc.createElement("div");
    row.className = `bubble-row ${role}`;
    const bubble = doc.createElement("div");
    bubble.className = `bubble ${role}`;
    // pre-wrap styling keeps visual structure without altering the content
    bubble.textContent = content;
    row.appendChild(bubble);

    const star = doc.createElement("button");
    star.className = "star";
    star.textContent = marked ? "★" : "☆";
    if (role === "user" && turnIndex !== null) {
      star.setAttribute("data-testid", `star-${turnIndex}`);
      star.title = marked ? "Unmark this question" : "Mark this question";
      star.addEventListener("click", () => {
        const cid = store.get().conversationId;
        if (!cid) return;
        markQuestion(cid, turnIndex, !marked)
          .then(() => refreshTranscript())
          .catch((error) => toastError(doc, error));
      });
    } else {
      star.disabled = true; // only the user's own questions can be marked
      star.title = "Only questions can be marked";
    }
    row.appendChild(star);
    transcript.appendChild(row);
  };

  const renderTranscript = (detail: ConversationDetail | null) => {
    transcript.innerHTML = "";
    const greeting = store.get().greeting;
    if (greeting) renderBubble("assistant", greeting, null, false);
    if (!detail) return;
    const marked = new Set(detail.marked);
    for (const turn of detail.turns) {
      renderBubble(turn.role, turn.content, turn.index, marked.has(turn.index));
    }
  };

  const refreshTranscript = (): Promise<void> => {
    const cid = store.get().conversationId;
    if (!cid) {
      renderTranscript(null);
      return Promise.resolve();
    }
    return getConversation(cid)
      .then(renderTranscript)
      .catch((error) => toastError(doc, error))
      .then(() => undefined);
  };

  // -- question chips -----------------------------------------------------------
  const chipBar = doc.createElement("div");
  chipBar.className = "chip-bar";
  chipBar.setAttribute("data-testid", "question-chips");
  main.appendChild(chipBar);
  getQuestions(state.draft.theme, state.selectedAbilities)
    .then((questions) => {
      for (const question of questions) {
        const chip = doc.createElement("button");
        chip.className = "chip";
        chip.textContent = question;
        chip.addEventListener("click", () => submitMessage(question));
        chipBar.appendChild(chip);
      }
    })
    .catch((error) => toastError(doc, error));

  // -- composer ---------------------------------------------------------------
  const composer = doc.createElement("form");
  composer.className = "composer";
  const input = doc.createElement("input");
  input.type = "text";
  input.placeholder = `Ask ${state.personaName} anything…`;
  input.setAttribute("data-testid", "chat-input");
  const send = doc.createElement("button");
  send.type = "submit";
  send.className = "primary";
  send.textContent = "Send";
  send.setAttribute("data-testid", "chat-send");
  composer.append(input, send);
  main.appendChild(composer);

  const setPending = (pending: boolean) => {
    store.get().chatPending = pending;
    send.disabled = pending;
    input.disabled = pending;
  };

  const submitMessage = (message: string) => {
    const text = message.trim();
    if (!text || store.get().chatPending) return;
    setPending(true);
    const attempt = () =>
      sendChat(personaId, store.get().conversationId, text)
        .then((response) => {
          if (response.conversation_id) {
            store.get().conversationId = response.conversation_id;
          }
          input.value = "";
          return refreshTranscript().then(refreshSidebar);
        })
        .catch((error) => toastError(doc, error, attempt))
        .finally(() => setPending(false));
    attempt();
  };

  composer.addEventListener("submit", (event) => {
    event.preventDefault();
    submitMessage(input.value);
  });

  // -- sidebar: history, new chat, script, notes, library ------------------------
  const newChat = doc.createElement("button");
  newChat.className = "primary wide";
  newChat.textContent = "New chat";
  newChat.setAttribute("data-testid", "new-chat");
  newChat.addEventListener("click", () => {
    store.get().conversationId = null; // next send opens a fresh conversation
    renderTranscript(null);
    refreshSidebar();
  });
  sidebar.appendChild(newChat);

  const historyTitle = doc.createElement("h3");
  historyTitle.textContent = "Historical chats";
  const historyList = doc.createElement("ul");
  historyList.className = "history-list";
  historyList.setAttribute("data-testid", "history-list");
  sidebar.append(historyTitle, historyList);

  const refreshSidebar = (): Promise<void> =>
    listConversations(personaId)
      .then((summaries) => {
        historyList.innerHTML = "";
        for (const summary of summaries) {
          const item = doc.createElement("li");
          const link = doc.createElement("button");
          link.className = "history-item";
          link.setAttribute("data-conversation-id", summary.conversation_id);
          const started = summary.created_at.slice(0, 16).replace("T", " ");
          link.textContent = `${started} · ${summary.turn_count} turns`;
          if (summary.conversation_id === store.get().conversationId) {
            link.classList.add("active");
          }
          link.addEventListener("click", () => {
            store.get().conversationId = summary.conversation_id;
            refreshTranscript().then(refreshSidebar);
          });
          item.appendChild(link);
          historyList.appendChild(item);
        }
      })
      .catch((error) => toastError(doc, error))
      .then(() => undefined);

  const scriptTitle = doc.createElement("h3");
  scriptTitle.textContent = "Interview script";
  const markedOnlyLabel = doc.createElement("label");
  markedOnlyLabel.className = "marked-only";
  const markedOnly = doc.createElement("input");
  markedOnly.type = "checkbox";
  markedOnly.setAttribute("data-testid", "marked-only");
  markedOnlyLabel.append(markedOnly, doc.createTextNode(" marked questions only"));
  const summarize = doc.createElement("button");
  summarize.className = "wide";
  summarize.textContent = "Summarize questions";
  summarize.setAttribute("data-testid", "summarize");
  const scriptPanel = doc.createElement("div");
  scriptPanel.className = "script-panel";
  scriptPanel.setAttribute("data-testid", "script-panel");
  summarize.addEventListener("click", () => {
    const cid = store.get().conversationId;
    if (!cid) {
      showToast(doc, "Start a conversation before summarizing.");
      return;
    }
    getScript(cid, markedOnly.checked)
      .then((script) => {
        scriptPanel.innerHTML = "";
        if (!script.items.length) {
          scriptPanel.textContent = "No question/answer pairs yet.";
          return;
        }
        for (const [question, answer] of script.items) {
          const item = doc.createElement("div");
          item.className = "script-item";
          const q = doc.createElement("p");
          q.className = "script-question";
          q.textContent = `Q: ${question}`;
          const a = doc.createElement("p");
          a.className = "script-answer";
          a.textContent = `A: ${answer}`;
          item.append(q, a);
          scriptPanel.appendChild(item);
        }
      })
      .catch((error) => toastError(doc, error));
  });
  sidebar.append(scriptTitle, markedOnlyLabel, summarize, scriptPanel);

  const notesTitle = doc.createElement("h3");
  notesTitle.textContent = "Notes";
  const noteForm = doc.createElement("form");
  noteForm.className = "note-form";
  const noteInput = doc.createElement("input");
  noteInput.type = "text";
  noteInput.placeholder = "Annotate this conversation…";
  noteInput.setAttribute("data-testid", "note-input");
  const noteSave = doc.createElement("button");
  noteSave.type = "submit";
  noteSave.textContent = "Add note";
  noteSave.setAttribute("data-testid", "note-save");
  noteForm.append(noteInput, noteSave);
  noteForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const cid = store.get().conversationId;
    const note = noteInput.value.trim();
    if (!cid || !note) return;
    annotate(cid, note)
      .then(() => {
        noteInput.value = "";
        showToast(doc, "Note added to the timeline.");
      })
      .catch((error) => toastError(doc, error));
  });
  sidebar.append(notesTitle, noteForm);

  const libraryLink = doc.createElement("button");
  libraryLink.className = "wide";
  libraryLink.textContent = "Persona library";
  libraryLink.setAttribute("data-testid", "open-library");
  libraryLink.addEventListener("click", () => store.set({ view: "library" }));
  sidebar.appendChild(libraryLink);

  refreshTranscript().then(refreshSidebar);
}
