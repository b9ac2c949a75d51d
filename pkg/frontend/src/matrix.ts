/**
 * Matrix column editor: pick which finding ids appear as presence
 * columns in the repository table. A null selection means "whatever
 * the server considers most widespread right now"; editing any column
 * materializes an explicit list, and reset returns to null.
 */

export function renderMatrixEditor(
  host: HTMLElement,
  rendered: string[],
  selection: string[] | null,
  onChange: (next: string[] | null) => void,
): void {
  host.textContent = "";
  host.classList.add("matrix-editor");

  const heading = document.createElement("span");
  heading.className = "matrix-heading";
  heading.textContent = selection === null ? "Matrix columns (server default)" : "Matrix columns (custom)";
  host.appendChild(heading);

  const list = document.createElement("span");
  list.className = "matrix-chips";
  for (const cveId of rendered) {
    const chip = document.createElement("span");
    chip.className = "matrix-chip";
    chip.dataset["cve"] = cveId;
    const label = document.createElement("span");
    label.textContent = cveId;
    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "chip-remove";
    remove.textContent = "×";
    remove.title = `Remove ${cveId}`;
    remove.addEventListener("click", () => {
      onChange(rendered.filter((id) => id !== cveId));
    });
    chip.append(label, remove);
    list.appendChild(chip);
  }
  if (rendered.length === 0) {
    const none = document.createElement("span");
    none.className = "matrix-none";
    none.textContent = "no columns";
    list.appendChild(none);
  }
  host.appendChild(list);

  const addInput = document.createElement("input");
  addInput.type = "text";
  addInput.className = "matrix-add-input";
  addInput.placeholder = "CVE-…";
  const addButton = document.createElement("button");
  addButton.type = "button";
  addButton.className = "matrix-add";
  addButton.textContent = "add";
  const add = (): void => {
    const cveId = addInput.value.trim();
    if (cveId === "" || rendered.includes(cveId)) return;
    onChange([...rendered, cveId]);
  };
  addButton.addEventListener("click", add);
  addInput.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") add();
  });
  host.append(addInput, addButton);

  const reset = document.createElement("button");
  reset.type = "button";
  reset.className = "matrix-reset";
  reset.textContent = "reset to default";
  reset.disabled = selection === null;
  reset.addEventListener("click", () => onChange(null));
  host.appendChild(reset);
}
