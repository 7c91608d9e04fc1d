// Step 1: free-text function labels per part of the training object.
// Labels are chips; several labels per part and the same label on several
// parts are both fine. Blank labels never leave the input field.

import { saveStep1, StaleSessionError } from './api';
import { store } from './store';

export function renderStep1(root: HTMLElement): void {
  const s = store.get();

  const heading = document.createElement('h2');
  heading.textContent = 'Step 1: what is each part for?';
  root.appendChild(heading);

  const objectRow = document.createElement('div');
  objectRow.className = 'field-row';
  const objectLabel = document.createElement('label');
  objectLabel.textContent = 'Training object ';
  const objectSelect = document.createElement('select');
  objectSelect.className = 'training-object';
  for (const obj of s.objects) {
    const option = document.createElement('option');
    option.value = obj.id;
    option.textContent = obj.display_name;
    objectSelect.appendChild(option);
  }
  if (s.trainingObjectId) objectSelect.value = s.trainingObjectId;
  objectLabel.appendChild(objectSelect);
  objectRow.appendChild(objectLabel);
  root.appendChild(objectRow);

  const partsHost = document.createElement('div');
  partsHost.className = 'parts';
  root.appendChild(partsHost);

  const saveButton = document.createElement('button');
  saveButton.className = 'save-step1';
  saveButton.textContent = 'Save and continue';
  root.appendChild(saveButton);

  function currentObject() {
    return store.get().objects.find((o) => o.id === objectSelect.value);
  }

  function renderParts(): void {
    const obj = currentObject();
    partsHost.innerHTML = '';
    if (!obj) return;
    const entries = store.get().trainingEntries;
    for (const part of obj.parts) {
      const row = document.createElement('div');
      row.className = 'part-row';
      row.dataset.part = part.id;

      const name = document.createElement('span');
      name.className = 'part-name';
      name.textContent = part.display_name;
      row.appendChild(name);

      const chips = document.createElement('span');
      chips.className = 'chips';
      for (const label of entries[part.id] ?? []) {
        const chip = document.createElement('span');
        chip.className = 'chip';
        chip.textContent = label;
        const remove = document.createElement('button');
        remove.textContent = '×';
        remove.title = 'remove label';
        remove.addEventListener('click', () => {
          const current = { ...store.get().trainingEntries };
          current[part.id] = (current[part.id] ?? []).filter((l) => l !== label);
          store.set({ trainingEntries: current });
          renderParts();
        });
        chip.appendChild(remove);
        chips.appendChild(chip);
      }
      row.appendChild(chips);

      const input = document.createElement('input');
      input.type = 'text';
      input.placeholder = 'e.g. provide electricity';
      const add = document.createElement('button');
      add.className = 'add-label';
      add.textContent = 'Add';
      const error = document.createElement('span');
      error.className = 'field-error';

      add.addEventListener('click', () => {
        const label = input.value.trim();
        if (!label) {
          error.textContent = 'label cannot be blank';
          return;
        }
        error.textContent = '';
        const current = { ...store.get().trainingEntries };
        const existing = current[part.id] ?? [];
        if (!existing.includes(label)) {
          current[part.id] = [...existing, label];
          store.set({ trainingEntries: current });
        }
        input.value = '';
        renderParts();
      });

      row.appendChild(input);
      row.appendChild(add);
      row.appendChild(error);
      partsHost.appendChild(row);
    }
  }

  objectSelect.addEventListener('change', () => {
    store.set({ trainingObjectId: objectSelect.value, trainingEntries: {} });
    renderParts();
  });

  saveButton.addEventListener('click', () => {
    void (async () => {
      const state = store.get();
      const objectId = objectSelect.value;
      if (!state.sessionId || !objectId) return;
      try {
        const saved = await saveStep1(
          state.sessionId,
          state.version,
          objectId,
          state.trainingEntries,
        );
        store.set({
          version: saved.version,
          trainingObjectId: objectId,
          maxCompletedStep: Math.max(state.maxCompletedStep, 0),
          stepIndex: 1,
          banner: null,
        });
      } catch (err) {
        if (err instanceof StaleSessionError) {
          store.set({ staleSession: true });
          return;
        }
        store.set({
          banner: { kind: 'blocking', text: `could not save labels: ${String(err)}` },
        });
      }
    })();
  });

  if (!s.trainingObjectId && s.objects.length > 0) {
    store.set({ trainingObjectId: s.objects[0].id });
  }
  renderParts();
}
