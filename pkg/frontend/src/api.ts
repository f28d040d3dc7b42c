/** Thin fetch wrappers over the analysis service. */

import { ServiceError } from "./errors.js";
import type { AnalysisResult, ExtractorDescriptor } from "./types.js";

export interface AnalyzeOptions {
  extractorId: string;
  includeNonRel: boolean;
  maxTokenDistance?: number;
}

declare global {
  interface Window {
    CNER_BASE_URL?: string;
  }
}

/** Base URL is configurable at runtime via window.CNER_BASE_URL; the default
 * (same origin) covers the service hosting the built assets itself. */
export function defaultBaseUrl(): string {
  return typeof window !== "undefined" && window.CNER_BASE_URL
    ? window.CNER_BASE_URL.replace(/\/$/, "")
    : "";
}

async function errorFromResponse(response: Response): Promise<ServiceError> {
  let code = "Unknown";
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && body.error && typeof body.error.code === "string") {
      code = body.error.code;
      message = String(body.error.message ?? message);
    }
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ServiceError(response.status, code, message);
}

export class ServiceClient {
  constructor(private readonly baseUrl: string = defaultBaseUrl()) {}

  async extractors(): Promise<ExtractorDescriptor[]> {
    const response = await fetch(`${this.baseUrl}/extractors`);
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as ExtractorDescriptor[];
  }

  async analyzeText(text: string, options: AnalyzeOptions): Promise<AnalysisResult> {
    const body: Record<string, unknown> = {
      text,
      extractor_id: options.extractorId,
      include_non_rel: options.includeNonRel,
    };
    if (options.maxTokenDistance !== undefined) {
      body.max_token_distance = options.maxTokenDistance;
    }
    const response = await fetch(`${this.baseUrl}/analyze`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as AnalysisResult;
  }

  async analyzeFile(file: File, options: AnalyzeOptions): Promise<AnalysisResult> {
    const form = new FormData();
    form.append("file", file, file.name);
    const optionsBody: Record<string, unknown> = {
      extractor_id: options.extractorId,
      include_non_rel: options.includeNonRel,
    };
    if (options.maxTokenDistance !== undefined) {
      optionsBody.max_token_distance = options.maxTokenDistance;
    }
    form.append("options", JSON.stringify(optionsBody));
    const response = await fetch(`${this.baseUrl}/analyze`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as AnalysisResult;
  }
}
