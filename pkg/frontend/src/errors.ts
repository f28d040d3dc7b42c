/** One distinct user-readable message per documented service error code;
 * unknown codes fall back to a generic message that keeps the raw code. */

export const ERROR_MESSAGES: Record<string, string> = {
  MalformedRequest:
    "The request was not understood by the service. Check the input and try again.",
  UnknownExtractor:
    "The selected extractor does not exist on the service. Reload the extractor list.",
  ExtractorNotReady:
    "The selected extractor is not ready (its model or endpoint is not configured).",
  PayloadTooLarge:
    "The text or file is too large for the service. Submit a smaller input.",
  UnsupportedFormat:
    "The service cannot read this file type. Upload .txt, .odt or a configured .doc.",
  CorruptFile:
    "The uploaded file could not be parsed. It may be damaged or mislabeled.",
  RemoteUnavailable:
    "The remote extraction service did not answer. Try again or pick another extractor.",
};

export function messageForError(code: string, detail?: string): string {
  const mapped = ERROR_MESSAGES[code];
  if (mapped !== undefined) {
    return mapped;
  }
  const suffix = detail ? ` (${detail})` : "";
  return `The service reported an unexpected error: ${code}${suffix}`;
}

export class ServiceError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }

  userMessage(): string {
    return messageForError(this.code, this.message);
  }
}
