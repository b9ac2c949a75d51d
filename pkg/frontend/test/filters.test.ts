import { afterEach, beforeEach, describe, expect, test, vi } from "vitest";

import { attachFilterPanel, DEBOUNCE_MS, validateFilter } from "../src/filters.js";
import { emptyFilter, type FilterForm } from "../src/state.js";

function form(overrides: Partial<FilterForm>): FilterForm {
  return { ...emptyFilter(), ...overrides };
}

describe("validateFilter", () => {
  test("an empty form is valid", () => {
    expect(validateFilter(emptyFilter())).toEqual({});
  });

  test("a fully populated valid form is valid", () => {
    const errors = validateFilter(
      form({
        nameQuery: "spring",
        minCvss: "4.0",
        maxCvss: "9.5",
        minDependencies: "1",
        maxDependencies: "40",
        minVulnerabilities: "0",
        maxVulnerabilities: "12",
      }),
    );
    expect(errors).toEqual({});
  });

  test("non-numeric score is flagged", () => {
    expect(validateFilter(form({ minCvss: "abc" }))).toHaveProperty("minCvss");
  });

  test("score outside 0..10 is flagged", () => {
    expect(validateFilter(form({ maxCvss: "11" }))).toHaveProperty("maxCvss");
    expect(validateFilter(form({ minCvss: "-0.5" }))).toHaveProperty("minCvss");
  });

  test("min score above max score is flagged on the min field", () => {
    const errors = validateFilter(form({ minCvss: "8", maxCvss: "2" }));
    expect(errors.minCvss).toBe("min exceeds max");
    expect(errors.maxCvss).toBeUndefined();
  });

  test("counts must be whole non-negative numbers", () => {
    expect(validateFilter(form({ minDependencies: "3.5" }))).toHaveProperty(
      "minDependencies",
    );
    expect(validateFilter(form({ maxVulnerabilities: "-1" }))).toHaveProperty(
      "maxVulnerabilities",
    );
  });

  test("count ranges check min against max", () => {
    const errors = validateFilter(
      form({ minVulnerabilities: "9", maxVulnerabilities: "2" }),
    );
    expect(errors.minVulnerabilities).toBe("min exceeds max");
  });
});

describe("attachFilterPanel", () => {
  let host: HTMLElement;
  let applied: FilterForm[];

  beforeEach(() => {
    vi.useFakeTimers();
    host = document.createElement("div");
    document.body.appendChild(host);
    applied = [];
    attachFilterPanel(host, emptyFilter(), (next) => applied.push(next));
  });

  afterEach(() => {
    vi.useRealTimers();
    host.remove();
  });

  function input(name: string): HTMLInputElement {
    const element = host.querySelector<HTMLInputElement>(`input[name="${name}"]`);
    if (element === null) throw new Error(`no input ${name}`);
    return element;
  }

  function type(name: string, value: string): void {
    const element = input(name);
    element.value = value;
    element.dispatchEvent(new Event("input", { bubbles: true }));
  }

  test("typing debounces into a single request", () => {
    type("nameQuery", "m");
    type("nameQuery", "ma");
    type("nameQuery", "marm");
    expect(applied).toHaveLength(0);
    vi.advanceTimersByTime(DEBOUNCE_MS - 1);
    expect(applied).toHaveLength(0);
    vi.advanceTimersByTime(1);
    expect(applied).toHaveLength(1);
    expect(applied[0]?.nameQuery).toBe("marm");
  });

  test("min above max flags inline and emits nothing", () => {
    type("minCvss", "8");
    type("maxCvss", "2");
    vi.advanceTimersByTime(DEBOUNCE_MS);
    expect(applied).toHaveLength(0);
    const error = host.querySelector<HTMLElement>('[data-for="minCvss"]');
    expect(error?.hidden).toBe(false);
    expect(error?.textContent).toBe("min exceeds max");
    expect(input("minCvss").classList.contains("invalid")).toBe(true);
  });

  test("fixing the invalid value clears the flag and emits", () => {
    type("minCvss", "8");
    type("maxCvss", "2");
    vi.advanceTimersByTime(DEBOUNCE_MS);
    expect(applied).toHaveLength(0);
    type("maxCvss", "9");
    vi.advanceTimersByTime(DEBOUNCE_MS);
    expect(applied).toHaveLength(1);
    expect(applied[0]?.maxCvss).toBe("9");
    const error = host.querySelector<HTMLElement>('[data-for="minCvss"]');
    expect(error?.hidden).toBe(true);
  });

  test("checkbox toggles apply immediately, skipping the debounce", () => {
    input("hideVulnerabilityFree").click();
    expect(applied).toHaveLength(1);
    expect(applied[0]?.hideVulnerabilityFree).toBe(true);
  });

  test("a pending text edit is included when a checkbox fires early", () => {
    type("nameQuery", "spr");
    input("hideUnscoredCves").click();
    expect(applied).toHaveLength(1);
    expect(applied[0]?.nameQuery).toBe("spr");
    expect(applied[0]?.hideUnscoredCves).toBe(true);
    // the cancelled timer must not fire a duplicate
    vi.advanceTimersByTime(DEBOUNCE_MS);
    expect(applied).toHaveLength(1);
  });
});
