import { beforeEach, describe, expect, test } from "vitest";

import { renderMatrixEditor } from "../src/matrix.js";
import { fixtures } from "./helpers.js";

let host: HTMLElement;
let changes: Array<string[] | null>;

beforeEach(() => {
  host = document.createElement("div");
  document.body.appendChild(host);
  changes = [];
});

const onChange = (next: string[] | null): void => {
  changes.push(next);
};

describe("renderMatrixEditor", () => {
  test("shows one chip per rendered column", () => {
    const defaults = fixtures.matrixDefaults().columns;
    renderMatrixEditor(host, defaults, null, onChange);
    const chips = [...host.querySelectorAll<HTMLElement>(".matrix-chip")];
    expect(chips.map((c) => c.dataset["cve"])).toEqual(defaults);
    expect(host.querySelector(".matrix-heading")?.textContent).toContain("server default");
  });

  test("removing a chip emits the remaining columns", () => {
    renderMatrixEditor(host, ["CVE-A", "CVE-B", "CVE-C"], ["CVE-A", "CVE-B", "CVE-C"], onChange);
    const chip = host.querySelector('[data-cve="CVE-B"] .chip-remove') as HTMLButtonElement;
    chip.click();
    expect(changes).toEqual([["CVE-A", "CVE-C"]]);
  });

  test("removing the last chip emits an explicit empty selection", () => {
    renderMatrixEditor(host, ["CVE-A"], ["CVE-A"], onChange);
    (host.querySelector(".chip-remove") as HTMLButtonElement).click();
    expect(changes).toEqual([[]]);
  });

  test("an empty selection renders a no-columns marker", () => {
    renderMatrixEditor(host, [], [], onChange);
    expect(host.querySelector(".matrix-none")?.textContent).toBe("no columns");
    expect(host.querySelectorAll(".matrix-chip")).toHaveLength(0);
  });

  test("adding by id appends the column last", () => {
    renderMatrixEditor(host, ["CVE-A"], ["CVE-A"], onChange);
    const input = host.querySelector(".matrix-add-input") as HTMLInputElement;
    input.value = "CVE-2018-1270";
    (host.querySelector(".matrix-add") as HTMLButtonElement).click();
    expect(changes).toEqual([["CVE-A", "CVE-2018-1270"]]);
  });

  test("blank or duplicate additions are ignored", () => {
    renderMatrixEditor(host, ["CVE-A"], ["CVE-A"], onChange);
    const input = host.querySelector(".matrix-add-input") as HTMLInputElement;
    const add = host.querySelector(".matrix-add") as HTMLButtonElement;
    input.value = "   ";
    add.click();
    input.value = "CVE-A";
    add.click();
    expect(changes).toEqual([]);
  });

  test("reset emits null and is disabled while already on defaults", () => {
    renderMatrixEditor(host, ["CVE-A"], ["CVE-A"], onChange);
    const reset = host.querySelector(".matrix-reset") as HTMLButtonElement;
    expect(reset.disabled).toBe(false);
    reset.click();
    expect(changes).toEqual([null]);

    renderMatrixEditor(host, fixtures.matrixDefaults().columns, null, onChange);
    expect((host.querySelector(".matrix-reset") as HTMLButtonElement).disabled).toBe(true);
  });
});
