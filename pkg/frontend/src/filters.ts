/**
 * Filter panel: free-text and range inputs that debounce into view
 * requests. Invalid input is flagged inline next to the offending
 * field and never reaches the server.
 */

import { type FilterForm } from "./state.js";

export const DEBOUNCE_MS = 250;

export type FilterErrors = Partial<Record<keyof FilterForm, string>>;

const SCORE_FIELDS = ["minCvss", "maxCvss"] as const;
const COUNT_PAIRS = [
  ["minDependencies", "maxDependencies"],
  ["minVulnerabilities", "maxVulnerabilities"],
] as const;

export function validateFilter(form: FilterForm): FilterErrors {
  const errors: FilterErrors = {};

  const scores: Partial<Record<(typeof SCORE_FIELDS)[number], number>> = {};
  for (const field of SCORE_FIELDS) {
    const raw = form[field].trim();
    if (raw === "") continue;
    const value = Number(raw);
    if (!Number.isFinite(value)) errors[field] = "not a number";
    else if (value < 0 || value > 10) errors[field] = "must be between 0 and 10";
    else scores[field] = value;
  }
  const { minCvss, maxCvss } = scores;
  if (minCvss !== undefined && maxCvss !== undefined && minCvss > maxCvss) {
    errors.minCvss = "min exceeds max";
  }

  for (const [minField, maxField] of COUNT_PAIRS) {
    const values: Partial<Record<string, number>> = {};
    for (const field of [minField, maxField]) {
      const raw = form[field].trim();
      if (raw === "") continue;
      const value = Number(raw);
      if (!Number.isFinite(value) || !Number.isInteger(value)) {
        errors[field] = "must be a whole number";
      } else if (value < 0) {
        errors[field] = "must be at least 0";
      } else {
        values[field] = value;
      }
    }
    const lo = values[minField];
    const hi = values[maxField];
    if (lo !== undefined && hi !== undefined && lo > hi) {
      errors[minField] = "min exceeds max";
    }
  }

  return errors;
}

export interface FilterPanelHandle {
  /** Read the current form straight from the inputs. */
  getForm(): FilterForm;
  /** Validate and, when clean, emit immediately (skips the debounce). */
  flush(): void;
}

interface FieldSpec {
  name: keyof FilterForm;
  label: string;
  placeholder?: string;
}

const TEXT_FIELDS: FieldSpec[] = [
  { name: "nameQuery", label: "Name contains" },
  { name: "minCvss", label: "Min CVSS", placeholder: "0.0" },
  { name: "maxCvss", label: "Max CVSS", placeholder: "10.0" },
  { name: "minDependencies", label: "Min deps" },
  { name: "maxDependencies", label: "Max deps" },
  { name: "minVulnerabilities", label: "Min vulns" },
  { name: "maxVulnerabilities", label: "Max vulns" },
];

const CHECKBOX_FIELDS: Array<{ name: keyof FilterForm; label: string }> = [
  { name: "hideVulnerabilityFree", label: "Hide vulnerability-free" },
  { name: "hideUnscoredCves", label: "Hide unscored findings" },
];

/**
 * Build the panel inside `host` and call `onValidChange` with the new
 * form whenever the user settles on a valid one. Text edits wait
 * DEBOUNCE_MS; checkbox clicks apply immediately.
 */
export function attachFilterPanel(
  host: HTMLElement,
  initial: FilterForm,
  onValidChange: (form: FilterForm) => void,
): FilterPanelHandle {
  host.textContent = "";
  host.classList.add("filter-panel");

  const inputs = new Map<keyof FilterForm, HTMLInputElement>();
  const errorSlots = new Map<keyof FilterForm, HTMLElement>();

  for (const spec of TEXT_FIELDS) {
    const label = document.createElement("label");
    label.className = "filter-field";
    const caption = document.createElement("span");
    caption.textContent = spec.label;
    const input = document.createElement("input");
    input.type = "text";
    input.name = spec.name;
    input.value = initial[spec.name] as string;
    if (spec.placeholder) input.placeholder = spec.placeholder;
    const error = document.createElement("span");
    error.className = "field-error";
    error.dataset["for"] = spec.name;
    error.hidden = true;
    label.append(caption, input, error);
    host.appendChild(label);
    inputs.set(spec.name, input);
    errorSlots.set(spec.name, error);
  }

  for (const spec of CHECKBOX_FIELDS) {
    const label = document.createElement("label");
    label.className = "filter-check";
    const input = document.createElement("input");
    input.type = "checkbox";
    input.name = spec.name;
    input.checked = initial[spec.name] as boolean;
    const caption = document.createElement("span");
    caption.textContent = spec.label;
    label.append(input, caption);
    host.appendChild(label);
    inputs.set(spec.name, input);
  }

  function getForm(): FilterForm {
    const form = { ...initial };
    for (const [name, input] of inputs) {
      if (input.type === "checkbox") (form[name] as boolean) = input.checked;
      else (form[name] as string) = input.value;
    }
    return form;
  }

  function showErrors(errors: FilterErrors): void {
    for (const [name, slot] of errorSlots) {
      const message = errors[name];
      slot.textContent = message ?? "";
      slot.hidden = message === undefined;
      inputs.get(name)?.classList.toggle("invalid", message !== undefined);
    }
  }

  let timer: ReturnType<typeof setTimeout> | null = null;

  function emit(): void {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
    }
    const form = getForm();
    const errors = validateFilter(form);
    showErrors(errors);
    if (Object.keys(errors).length === 0) onValidChange(form);
  }

  function schedule(): void {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(emit, DEBOUNCE_MS);
  }

  for (const input of inputs.values()) {
    if (input.type === "checkbox") input.addEventListener("change", emit);
    else input.addEventListener("input", schedule);
  }

  return { getForm, flush: emit };
}
