/** Application state and wiring: one in-flight request at a time, submit
 * gated on having input, every service error mapped to a readable banner. */

import { ServiceClient } from "./api.js";
import { ServiceError, messageForError } from "./errors.js";
import {
  renderExtractorSelector,
  renderLegend,
  renderRelationTable,
  renderSentencePanels,
  renderWarnings,
} from "./render.js";
import type { AnalysisResult, ExtractorDescriptor } from "./types.js";

export type InputMode = "textarea" | "file";

export interface UiState {
  mode: InputMode;
  text: string;
  file: File | null;
  extractorId: string | null;
  includeNonRel: boolean;
  inFlight: boolean;
  lastResult: AnalysisResult | null;
  lastError: string | null;
}

export function initialState(): UiState {
  return {
    mode: "textarea",
    text: "",
    file: null,
    extractorId: null,
    includeNonRel: false,
    inFlight: false,
    lastResult: null,
    lastError: null,
  };
}

/** Submit is allowed only when idle and there is something to send. */
export function canSubmit(state: UiState): boolean {
  if (state.inFlight || state.extractorId === null) {
    return false;
  }
  if (state.mode === "textarea") {
    return state.text.trim().length > 0;
  }
  return state.file !== null;
}

export class App {
  readonly state: UiState = initialState();
  private selectorHost!: HTMLElement;
  private resultsHost!: HTMLElement;
  private banner!: HTMLElement;
  private submitButton!: HTMLButtonElement;
  private textArea!: HTMLTextAreaElement;
  private fileInput!: HTMLInputElement;
  private fileInfo!: HTMLElement;

  constructor(private readonly client: ServiceClient = new ServiceClient()) {}

  mount(root: HTMLElement): void {
    root.innerHTML = "";

    this.banner = document.createElement("div");
    this.banner.className = "banner";
    this.banner.hidden = true;
    root.appendChild(this.banner);

    this.selectorHost = document.createElement("div");
    this.selectorHost.className = "selector-host";
    root.appendChild(this.selectorHost);

    root.appendChild(this.buildInputForm());

    this.resultsHost = document.createElement("div");
    this.resultsHost.className = "results-host";
    root.appendChild(this.resultsHost);

    void this.loadExtractors();
  }

  private buildInputForm(): HTMLElement {
    const form = document.createElement("form");
    form.className = "input-form";
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });

    const modeRow = document.createElement("div");
    modeRow.className = "mode-row";
    for (const [mode, label] of [
      ["textarea", "Type text"],
      ["file", "Upload a file"],
    ] as [InputMode, string][]) {
      const wrapper = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "input-mode";
      radio.value = mode;
      radio.checked = this.state.mode === mode;
      radio.addEventListener("change", () => {
        this.state.mode = mode;
        this.refreshControls();
      });
      wrapper.appendChild(radio);
      wrapper.appendChild(document.createTextNode(label));
      modeRow.appendChild(wrapper);
    }
    form.appendChild(modeRow);

    this.textArea = document.createElement("textarea");
    this.textArea.rows = 5;
    this.textArea.placeholder = "Escriba aquí un texto en español…";
    this.textArea.addEventListener("input", () => {
      this.state.text = this.textArea.value;
      this.refreshControls();
    });
    form.appendChild(this.textArea);

    this.fileInput = document.createElement("input");
    this.fileInput.type = "file";
    this.fileInput.addEventListener("change", () => {
      this.state.file = this.fileInput.files?.[0] ?? null;
      this.refreshControls();
    });
    form.appendChild(this.fileInput);

    this.fileInfo = document.createElement("span");
    this.fileInfo.className = "file-info";
    form.appendChild(this.fileInfo);

    const nonRel = document.createElement("label");
    nonRel.className = "non-rel-toggle";
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.addEventListener("change", () => {
      this.state.includeNonRel = checkbox.checked;
    });
    nonRel.appendChild(checkbox);
    nonRel.appendChild(document.createTextNode("Include NON-REL pairs"));
    form.appendChild(nonRel);

    this.submitButton = document.createElement("button");
    this.submitButton.type = "submit";
    this.submitButton.textContent = "Analyze";
    this.submitButton.disabled = true;
    form.appendChild(this.submitButton);
    return form;
  }

  async loadExtractors(): Promise<void> {
    this.selectorHost.innerHTML = "";
    let descriptors: ExtractorDescriptor[];
    try {
      descriptors = await this.client.extractors();
    } catch (error) {
      this.showBanner(
        "The analysis service is unreachable. Check that it is running.",
        () => void this.loadExtractors(),
      );
      return;
    }
    this.hideBanner();
    if (this.state.extractorId === null) {
      const firstReady = descriptors.find((d) => d.ready);
      this.state.extractorId = firstReady ? firstReady.id : null;
    }
    this.selectorHost.appendChild(
      renderExtractorSelector(descriptors, this.state.extractorId, (id) => {
        this.state.extractorId = id;
        this.refreshControls();
      }),
    );
    this.refreshControls();
  }

  async submit(): Promise<void> {
    if (!canSubmit(this.state)) {
      return;
    }
    this.state.inFlight = true;
    this.state.lastError = null;
    this.refreshControls();
    const options = {
      extractorId: this.state.extractorId as string,
      includeNonRel: this.state.includeNonRel,
    };
    try {
      const result =
        this.state.mode === "file"
          ? await this.client.analyzeFile(this.state.file as File, options)
          : await this.client.analyzeText(this.state.text, options);
      this.state.lastResult = result;
      this.hideBanner();
      this.renderResult(result);
    } catch (error) {
      const message =
        error instanceof ServiceError
          ? error.userMessage()
          : messageForError("Unknown", String(error));
      this.state.lastError = message;
      this.showBanner(message);
    } finally {
      this.state.inFlight = false;
      this.refreshControls();
    }
  }

  renderResult(result: AnalysisResult): void {
    this.resultsHost.innerHTML = "";
    this.resultsHost.appendChild(renderLegend());
    this.resultsHost.appendChild(renderSentencePanels(result));
    const heading = document.createElement("h2");
    heading.textContent = "Relations";
    this.resultsHost.appendChild(heading);
    this.resultsHost.appendChild(renderRelationTable(result));
    if (result.warnings.length > 0) {
      this.resultsHost.appendChild(renderWarnings(result.warnings));
    }
  }

  refreshControls(): void {
    this.submitButton.disabled = !canSubmit(this.state);
    this.textArea.hidden = this.state.mode !== "textarea";
    this.fileInput.hidden = this.state.mode !== "file";
    const file = this.state.file;
    this.fileInfo.textContent =
      this.state.mode === "file" && file ? `${file.name} (${file.size} bytes)` : "";
  }

  private showBanner(message: string, retry?: () => void): void {
    this.banner.hidden = false;
    this.banner.innerHTML = "";
    this.banner.appendChild(document.createTextNode(message));
    if (retry) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "retry";
      button.textContent = "Retry";
      button.addEventListener("click", retry);
      this.banner.appendChild(button);
    }
  }

  private hideBanner(): void {
    this.banner.hidden = true;
    this.banner.innerHTML = "";
  }
}
