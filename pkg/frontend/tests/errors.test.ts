import { describe, expect, it } from "vitest";

import { ERROR_MESSAGES, ServiceError, messageForError } from "../src/errors.js";

const DOCUMENTED_CODES = [
  "MalformedRequest",
  "UnknownExtractor",
  "ExtractorNotReady",
  "PayloadTooLarge",
  "UnsupportedFormat",
  "CorruptFile",
  "RemoteUnavailable",
];

describe("error code mapping", () => {
  it("covers every documented code", () => {
    for (const code of DOCUMENTED_CODES) {
      expect(ERROR_MESSAGES[code], code).toBeDefined();
    }
  });

  it("maps each documented code to a distinct message", () => {
    const messages = DOCUMENTED_CODES.map((code) => messageForError(code));
    expect(new Set(messages).size).toBe(DOCUMENTED_CODES.length);
  });

  it("advises smaller input on PayloadTooLarge", () => {
    expect(messageForError("PayloadTooLarge").toLowerCase()).toContain("smaller");
  });

  it("falls back to a generic message carrying the raw code", () => {
    const message = messageForError("TotallyNewCode", "backend said so");
    expect(message).toContain("TotallyNewCode");
    expect(message).toContain("backend said so");
    expect(DOCUMENTED_CODES.every((code) => !message.includes(ERROR_MESSAGES[code]))).toBe(true);
  });

  it("ServiceError.userMessage uses the mapping", () => {
    const error = new ServiceError(404, "UnknownExtractor", "unknown extractor 'x'");
    expect(error.userMessage()).toBe(ERROR_MESSAGES.UnknownExtractor);
  });
});
