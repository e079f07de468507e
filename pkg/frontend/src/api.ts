// Typed client for the persona-workbench HTTP API.
// Every non-2xx response carries {"error": {code, message, field}}; that
// envelope is surfaced as a ServiceError so views can show inline messages
// and offer retry on 502s.

import { apiBase } from "./config.js";

export interface ErrorEnvelope {
  code: string;
  message: string;
  field: string | null;
  retryable?: boolean;
}

export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;
  readonly field: string | null;
  readonly retryable: boolean;

  constructor(status: number, envelope: ErrorEnvelope) {
    super(envelope.message);
    this.status = status;
    this.code = envelope.code;
    this.field = envelope.field;
    this.retryable = envelope.retryable ?? status === 502;
  }
}

export interface PersonaCreationResponse {
  description: string;
  system_prompt: string;
  assistant_message: string;
  persona_id: string;
}

export interface ChatTurn {
  role: "system" | "assistant" | "user";
  content: string;
}

export interface ChatResponse {
  assistant_message: { role: "assistant"; content: string };
  persona_id?: string;
  conversation_id?: string;
}

export interface AbilityFactor {
  name: string;
  story: string;
}

export interface AbilityEntry {
  theme: string;
  name: string;
  description: string;
  drivers: AbilityFactor[];
  blockers: AbilityFactor[];
}

export interface PersonaSummary {
  persona_id: string;
  name: string;
  theme: string;
  created_at: string;
  description: string;
}

export interface PersonaProfile {
  persona_id: string;
  theme: string;
  name: string;
  age: number;
  occupation: string;
  medical_condition: string;
  selected_abilities: [string, string][];
  description: string;
  system_prompt: string;
  created_at: string;
}

export interface StoredTurn {
  index: number;
  role: string;
  content: string;
  timestamp: string;
}

export interface TimelineEvent {
  event_id: string;
  conversation_id: string;
  kind: string;
  payload: string;
  timestamp: string;
}

export interface ConversationDetail {
  conversation_id: string;
  persona_id: string;
  created_at: string;
  turns: StoredTurn[];
  marked: number[];
  events: TimelineEvent[];
}

export interface ConversationSummary {
  conversation_id: string;
  persona_id: string;
  created_at: string;
  turn_count: number;
  marked_count: number;
}

export interface InterviewScript {
  conversation_id: string;
  persona_id: string;
  generated_at: string;
  marked_only: boolean;
  items: [string, string][];
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${apiBase()}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
  } catch (cause) {
    throw new ServiceError(0, {
      code: "network_error",
      message: `service unreachable: ${String(cause)}`,
      field: null,
      retryable: true,
    });
  }
  if (!response.ok) {
    let envelope: ErrorEnvelope = {
      code: "unknown_error",
      message: `request failed with status ${response.status}`,
      field: null,
    };
    try {
      const body = await response.json();
      if (body && typeof body === "object" && "error" in body) {
        envelope = body.error as ErrorEnvelope;
      }
    } catch {
      // non-JSON error body; keep the fallback envelope
    }
    throw new ServiceError(response.status, envelope);
  }
  return (await response.json()) as T;
}

export function getThemes(): Promise<string[]> {
  return request<string[]>("/api/themes");
}

export function createPersona(
  theme: string,
  profile: { name: string; age: number; occupation: string; medicalCondition: string },
): Promise<PersonaCreationResponse> {
  return request<PersonaCreationResponse>("/api/personas", {
    method: "POST",
    body: JSON.stringify({
      theme,
      profile: {
        name: profile.name,
        age: profile.age,
        occupation: profile.occupation,
        "Medical Condition": profile.medicalCondition,
      },
    }),
  });
}

export function getAbilities(theme: string): Promise<AbilityEntry[]> {
  return request<AbilityEntry[]>(`/api/themes/${encodeURIComponent(theme)}/abilities`);
}

export function selectAbilities(
  personaId: string,
  theme: string,
  names: string[],
): Promise<PersonaProfile> {
  return request<PersonaProfile>(`/api/personas/${encodeURIComponent(personaId)}`, {
    method: "PATCH",
    body: JSON.stringify({
      selected_abilities: names.map((name) => ({ theme, name })),
    }),
  });
}

export function getQuestions(theme: string, abilities: string[]): Promise<string[]> {
  const params = new URLSearchParams({ theme });
  for (const ability of abilities) params.append("ability", ability);
  return request<string[]>(`/api/questions?${params.toString()}`);
}

export function sendChat(
  personaId: string,
  conversationId: string | null,
  userMessage: string,
): Promise<ChatResponse> {
  const body: Record<string, unknown> = {
    persona_id: personaId,
    context: [{ role: "user", content: userMessage }],
  };
  if (conversationId) body.conversation_id = conversationId;
  return request<ChatResponse>("/api/chat", { method: "POST", body: JSON.stringify(body) });
}

export function listPersonas(): Promise<PersonaSummary[]> {
  return request<PersonaSummary[]>("/api/personas");
}

export function getPersona(personaId: string): Promise<PersonaProfile> {
  return request<PersonaProfile>(`/api/personas/${encodeURIComponent(personaId)}`);
}

export function newConversation(personaId: string): Promise<{ conversation_id: string }> {
  return request<{ conversation_id: string }>(
    `/api/personas/${encodeURIComponent(personaId)}/conversations`,
    { method: "POST" },
  );
}

export function listConversations(personaId: string): Promise<ConversationSummary[]> {
  return request<ConversationSummary[]>(
    `/api/personas/${encodeURIComponent(personaId)}/conversations`,
  );
}

export function getConversation(conversationId: string): Promise<ConversationDetail> {
  return request<ConversationDetail>(
    `/api/conversations/${encodeURIComponent(conversationId)}`,
  );
}

export function markQuestion(
  conversationId: string,
  turnIndex: number,
  marked: boolean,
): Promise<{ conversation_id: string; marked: number[] }> {
  return request(`/api/conversations/${encodeURIComponent(conversationId)}/mark`, {
    method: "POST",
    body: JSON.stringify({ turn_index: turnIndex, marked }),
  });
}

export function annotate(conversationId: string, note: string): Promise<TimelineEvent> {
  return request<TimelineEvent>(
    `/api/conversations/${encodeURIComponent(conversationId)}/annotate`,
    { method: "POST", body: JSON.stringify({ note }) },
  );
}

export function getScript(
  conversationId: string,
  markedOnly: boolean,
): Promise<InterviewScript> {
  const params = new URLSearchParams({ marked_only: String(markedOnly) });
  return request<InterviewScript>(
    `/api/conversations/${encodeURIComponent(conversationId)}/script?${params.toString()}`,
  );
}
