/**
 * DOM wiring for the demo page: speaker/emotion form fed by the metadata
 * endpoints, synthesis with inline error reporting, audio playback, a
 * request history, and the mel-spectrogram heatmap from the diagnostics
 * endpoint. One request in flight at a time; the submit control is
 * disabled while waiting or when the text is empty.
 */

import { ApiError, SynthesisClient, SpeakerInfo } from "./api.js";
import { renderSpectrogram, cellAt } from "./spectrogram.js";
import { AUTO, DemoState, canSubmit, initialState, localValidationError } from "./state.js";

export interface AppElements {
  banner: HTMLDivElement;
  form: HTMLFormElement;
  text: HTMLTextAreaElement;
  speaker: HTMLSelectElement;
  emotion: HTMLSelectElement;
  diagnostics: HTMLInputElement;
  submit: HTMLButtonElement;
  error: HTMLDivElement;
  badge: HTMLSpanElement;
  rtt: HTMLSpanElement;
  player: HTMLAudioElement;
  history: HTMLUListElement;
  spectrogram: HTMLCanvasElement;
  spectrogramPrev: HTMLCanvasElement;
  tooltip: HTMLDivElement;
}

export interface AppOptions {
  maxTextLength?: number;
  createObjectUrl?: (blob: Blob) => string;
}

function element<T extends HTMLElement>(tag: string, className?: string): T {
  const node = document.createElement(tag) as T;
  if (className) node.className = className;
  return node;
}

export class DemoApp {
  readonly state: DemoState = initialState();
  readonly elements: AppElements;
  private validEmotions = new Set<string>();
  private readonly maxTextLength: number;
  private readonly createObjectUrl?: (blob: Blob) => string;

  constructor(
    root: HTMLElement,
    private readonly client: SynthesisClient,
    options: AppOptions = {},
  ) {
    this.maxTextLength = options.maxTextLength ?? 500;
    this.createObjectUrl =
      options.createObjectUrl ??
      (typeof URL !== "undefined" && "createObjectURL" in URL
        ? (blob) => URL.createObjectURL(blob)
        : undefined);
    this.elements = this.buildDom(root);
    this.elements.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.elements.text.addEventListener("input", () => {
      this.state.text = this.elements.text.value;
      this.refreshControls();
    });
    this.elements.speaker.addEventListener("change", () => {
      this.state.speaker = this.elements.speaker.value || null;
      this.refreshControls();
    });
    this.elements.emotion.addEventListener("change", () => {
      this.state.emotionMode = this.elements.emotion.value;
    });
  }

  private buildDom(root: HTMLElement): AppElements {
    const banner = element<HTMLDivElement>("div", "banner hidden");
    const form = element<HTMLFormElement>("form", "synth-form");
    const text = element<HTMLTextAreaElement>("textarea");
    text.id = "text";
    text.placeholder = "Type something to say...";
    const speaker = element<HTMLSelectElement>("select");
    speaker.id = "speaker";
    const emotion = element<HTMLSelectElement>("select");
    emotion.id = "emotion";
    const diagnostics = element<HTMLInputElement>("input");
    diagnostics.type = "checkbox";
    diagnostics.id = "diagnostics";
    diagnostics.checked = true;
    const submit = element<HTMLButtonElement>("button", "submit");
    submit.type = "submit";
    submit.textContent = "Synthesize";
    submit.disabled = true;
    const error = element<HTMLDivElement>("div", "error hidden");
    error.setAttribute("role", "alert");
    const badge = element<HTMLSpanElement>("span", "badge hidden");
    const rtt = element<HTMLSpanElement>("span", "rtt");
    const player = element<HTMLAudioElement>("audio");
    player.controls = true;
    const history = element<HTMLUListElement>("ul", "history");
    const spectrogram = element<HTMLCanvasElement>("canvas", "spectrogram hidden");
    const spectrogramPrev = element<HTMLCanvasElement>(
      "canvas", "spectrogram previous hidden",
    );
    const tooltip = element<HTMLDivElement>("div", "tooltip hidden");

    const speakerLabel = element<HTMLLabelElement>("label");
    speakerLabel.textContent = "Speaker ";
    speakerLabel.appendChild(speaker);
    const emotionLabel = element<HTMLLabelElement>("label");
    emotionLabel.textContent = "Emotion ";
    emotionLabel.appendChild(emotion);
    const diagnosticsLabel = element<HTMLLabelElement>("label");
    diagnosticsLabel.appendChild(diagnostics);
    diagnosticsLabel.appendChild(document.createTextNode(" show spectrogram"));

    const heatmaps = element<HTMLDivElement>("div", "heatmaps");
    heatmaps.append(spectrogram, spectrogramPrev);

    form.append(text, speakerLabel, emotionLabel, diagnosticsLabel, submit, error);
    root.append(banner, form, badge, rtt, player, history, heatmaps, tooltip);

    spectrogram.addEventListener("mousemove", (event) => {
      this.showTooltip(event);
    });
    spectrogram.addEventListener("mouseleave", () => {
      tooltip.classList.add("hidden");
    });
    return {
      banner, form, text, speaker, emotion, diagnostics, submit,
      error, badge, rtt, player, history, spectrogram, spectrogramPrev, tooltip,
    };
  }

  /** Populate the form from the metadata endpoints. */
  async init(): Promise<void> {
    let speakers: SpeakerInfo[];
    let emotions: Record<string, number>;
    try {
      [speakers, emotions] = await Promise.all([
        this.client.speakers(),
        this.client.emotions(),
      ]);
    } catch {
      this.elements.banner.textContent =
        "Synthesis service unreachable. Start it and reload.";
      this.elements.banner.classList.remove("hidden");
      this.setFormDisabled(true);
      return;
    }
    this.renderForm(speakers, emotions);
  }

  renderForm(speakers: SpeakerInfo[], emotions: Record<string, number>): void {
    const speakerSelect = this.elements.speaker;
    speakerSelect.innerHTML = "";
    for (const speaker of speakers) {
      const option = document.createElement("option");
      option.value = speaker.id;
      option.textContent = `${speaker.id} (${speaker.gender})`;
      speakerSelect.appendChild(option);
    }
    const emotionSelect = this.elements.emotion;
    emotionSelect.innerHTML = "";
    const auto = document.createElement("option");
    auto.value = AUTO;
    auto.textContent = "Auto (detect from text)";
    emotionSelect.appendChild(auto);
    for (const name of Object.keys(emotions).sort((a, b) => emotions[a]! - emotions[b]!)) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      emotionSelect.appendChild(option);
    }
    this.validEmotions = new Set(Object.keys(emotions));

    if (speakers.length === 0) {
      this.setFormDisabled(true);
      this.showError(null, "No speakers available in the loaded model.");
      return;
    }
    this.state.speaker = speakers[0]!.id;
    speakerSelect.value = this.state.speaker;
    this.state.emotionMode = AUTO;
    this.refreshControls();
  }

  private setFormDisabled(disabled: boolean): void {
    for (const control of [
      this.elements.text, this.elements.speaker,
      this.elements.emotion, this.elements.submit,
    ]) {
      (control as HTMLInputElement).disabled = disabled;
    }
  }

  private refreshControls(): void {
    this.elements.submit.disabled = !canSubmit(this.state);
  }

  private showError(field: string | null, message: string): void {
    this.elements.error.textContent = field ? `${field}: ${message}` : message;
    this.elements.error.classList.remove("hidden");
  }

  private clearError(): void {
    this.elements.error.textContent = "";
    this.elements.error.classList.add("hidden");
  }

  /** POST the current state; play audio and update badge/history on success. */
  async submit(): Promise<void> {
    if (this.state.inFlight) return;
    this.clearError();
    const invalid = localValidationError(this.state, this.validEmotions, this.maxTextLength);
    if (invalid) {
      this.showError(invalid.field, invalid.message);
      return;
    }
    this.state.inFlight = true;
    this.elements.submit.disabled = true;
    try {
      const result = await this.client.synthesize(
        this.state.text, this.state.speaker!, this.state.emotionMode,
      );
      this.state.lastEmotion = { name: result.emotionName, source: result.emotionSource };
      const suffix = result.emotionSource === "classifier" ? " (auto)" : "";
      this.elements.badge.textContent = `${result.emotionName}${suffix}`;
      this.elements.badge.classList.remove("hidden");
      this.elements.rtt.textContent = `${result.rttMs.toFixed(0)} ms`;
      if (this.createObjectUrl) {
        this.elements.player.src = this.createObjectUrl(result.audio);
        try {
          void this.elements.player.play()?.catch(() => undefined);
        } catch {
          // jsdom and autoplay-blocking browsers: the audio element still
          // has the blob; the user can press play.
        }
      }
      this.state.history.push({
        text: this.state.text,
        speaker: this.state.speaker!,
        emotion: result.emotionName,
        source: result.emotionSource,
        seconds: result.rttMs / 1000,
      });
      const item = document.createElement("li");
      item.textContent =
        `${this.state.speaker}: "${this.state.text}" -> ` +
        `${result.emotionName}${suffix} in ${(result.rttMs / 1000).toFixed(2)}s`;
      this.elements.history.appendChild(item);
      if (this.elements.diagnostics.checked) {
        await this.renderDiagnostics();
      }
    } catch (error) {
      if (error instanceof ApiError) {
        this.showError(error.detail.field, error.detail.message);
      } else {
        this.showError(null, "Request failed; is the service still running?");
      }
    } finally {
      this.state.inFlight = false;
      this.refreshControls();
    }
  }

  lastMel: number[][] = [];
  previousMel: number[][] = [];

  private async renderDiagnostics(): Promise<void> {
    try {
      const diag = await this.client.synthesizeDiagnostics(
        this.state.text, this.state.speaker!, this.state.emotionMode,
      );
      // Keep the previous request's heatmap alongside for comparison
      // (e.g. the same text under two different emotions).
      if (this.lastMel.length > 0) {
        this.previousMel = this.lastMel;
        const drawnPrev = renderSpectrogram(
          this.elements.spectrogramPrev, this.previousMel,
        );
        this.elements.spectrogramPrev.classList.toggle("hidden", !drawnPrev);
      }
      this.lastMel = diag.mel;
      const drawn = renderSpectrogram(this.elements.spectrogram, diag.mel);
      this.elements.spectrogram.classList.toggle("hidden", !drawn);
    } catch {
      this.elements.spectrogram.classList.add("hidden");
      this.elements.spectrogramPrev.classList.add("hidden");
    }
  }

  private showTooltip(event: MouseEvent): void {
    const canvas = this.elements.spectrogram;
    const rect = canvas.getBoundingClientRect();
    const hit = cellAt(
      this.lastMel, rect.width || canvas.width, rect.height || canvas.height,
      event.clientX - rect.left, event.clientY - rect.top,
    );
    if (!hit) {
      this.elements.tooltip.classList.add("hidden");
      return;
    }
    this.elements.tooltip.textContent =
      `frame ${hit.frame}, band ${hit.band}: ${hit.value.toFixed(2)}`;
    this.elements.tooltip.classList.remove("hidden");
  }
}
