/** Demo page state and the local validation the UI enforces before posting. */

export const AUTO = "auto";

export interface HistoryEntry {
  text: string;
  speaker: string;
  emotion: string;
  source: string;
  seconds: number;
}

export interface DemoState {
  text: string;
  speaker: string | null;
  emotionMode: string; // AUTO or one of the five emotion names
  inFlight: boolean;
  lastEmotion: { name: string; source: string } | null;
  history: HistoryEntry[];
}

export function initialState(): DemoState {
  return {
    text: "",
    speaker: null,
    emotionMode: AUTO,
    inFlight: false,
    lastEmotion: null,
    history: [],
  };
}

/** Submission is blocked while a request is in flight or the text is empty. */
export function canSubmit(state: DemoState): boolean {
  return !state.inFlight && state.text.trim().length > 0 && state.speaker !== null;
}

/**
 * Validation the client can perform locally; mirrors the service rules so
 * the UI never sends a request it already knows is invalid.
 */
export function localValidationError(
  state: DemoState,
  validEmotions: Set<string>,
  maxTextLength = 500,
): { field: string; message: string } | null {
  if (state.text.trim().length === 0) {
    return { field: "text", message: "Enter some text to synthesize." };
  }
  if (state.text.length > maxTextLength) {
    return {
      field: "text",
      message: `Text is limited to ${maxTextLength} characters.`,
    };
  }
  if (state.speaker === null) {
    return { field: "speaker_id", message: "Pick a speaker." };
  }
  if (state.emotionMode !== AUTO && !validEmotions.has(state.emotionMode)) {
    return { field: "emotion", message: `Unknown emotion '${state.emotionMode}'.` };
  }
  return null;
}
