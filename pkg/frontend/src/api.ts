/**
 * Typed client for the synthesis service. The HTTP contract is the only
 * coupling to the backend: metadata endpoints, WAV-returning /synthesize,
 * and the JSON diagnostics variant.
 */

export interface SpeakerInfo {
  id: string;
  gender: string;
}

export interface ServiceError {
  code: string;
  field: string | null;
  message: string;
}

export interface SynthesisResult {
  audio: Blob;
  emotionId: number;
  emotionName: string;
  emotionSource: "manual" | "classifier";
  rttMs: number;
}

export interface DiagnosticsResult {
  audioBase64: string;
  sampleRate: number;
  audioSeconds: number;
  emotion: { id: number; name: string; source: string };
  mel: number[][];
  timings: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: ServiceError,
  ) {
    super(detail.message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFromResponse(response: Response): Promise<ApiError> {
  let detail: ServiceError;
  try {
    detail = (await response.json()) as ServiceError;
  } catch {
    detail = { code: "HTTP_ERROR", field: null, message: `HTTP ${response.status}` };
  }
  return new ApiError(response.status, detail);
}

export class SynthesisClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async speakers(): Promise<SpeakerInfo[]> {
    const response = await this.fetchImpl(this.url("/speakers"));
    if (!response.ok) throw await errorFromResponse(response);
    const body = (await response.json()) as { speakers: SpeakerInfo[] };
    return body.speakers;
  }

  async emotions(): Promise<Record<string, number>> {
    const response = await this.fetchImpl(this.url("/emotions"));
    if (!response.ok) throw await errorFromResponse(response);
    const body = (await response.json()) as { emotions: Record<string, number> };
    return body.emotions;
  }

  async synthesize(
    text: string,
    speakerId: string,
    emotion: string,
    seed = 0,
  ): Promise<SynthesisResult> {
    const started = performance.now();
    const response = await this.fetchImpl(this.url("/synthesize"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, speaker_id: speakerId, emotion, seed }),
    });
    if (!response.ok) throw await errorFromResponse(response);
    const audio = await response.blob();
    return {
      audio,
      emotionId: Number(response.headers.get("X-Emotion-Id") ?? -1),
      emotionName: response.headers.get("X-Emotion-Name") ?? "unknown",
      emotionSource:
        (response.headers.get("X-Emotion-Source") as "manual" | "classifier") ??
        "manual",
      rttMs: performance.now() - started,
    };
  }

  async synthesizeDiagnostics(
    text: string,
    speakerId: string,
    emotion: string,
    seed = 0,
  ): Promise<DiagnosticsResult> {
    const response = await this.fetchImpl(this.url("/synthesize/diagnostics"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, speaker_id: speakerId, emotion, seed }),
    });
    if (!response.ok) throw await errorFromResponse(response);
    const body = (await response.json()) as {
      audio_wav_base64: string;
      sample_rate: number;
      audio_seconds: number;
      emotion: { id: number; name: string; source: string };
      mel: number[][];
      timings: Record<string, number>;
    };
    return {
      audioBase64: body.audio_wav_base64,
      sampleRate: body.sample_rate,
      audioSeconds: body.audio_seconds,
      emotion: body.emotion,
      mel: body.mel,
      timings: body.timings,
    };
  }
}
