// Step 3: bind a test object under the frozen model and show the verdict.
// The model pane is read-only and the transfer request carries only
// {version, test_object, entries}: there is no way to send model edits
// from this screen.

import { StaleSessionError, submitTransfer } from './api';
import { store } from './store';
import type { TransferResultDoc } from './types';

export function modelVocabulary(): string[] {
  const graph = store.get().graph;
  if (!graph) return [];
  return graph.nodes.filter((n) => n.kind === 'function').map((n) => n.label);
}

export function renderStep3(root: HTMLElement): void {
  const s = store.get();

  const heading = document.createElement('h2');
  heading.textContent = 'Step 3: does the model carry over?';
  root.appendChild(heading);

  const frozen = document.createElement('div');
  frozen.className = 'frozen-model';
  const frozenTitle = document.createElement('p');
  frozenTitle.className = 'frozen-note';
  frozenTitle.textContent = 'Your causal model (read-only at this step):';
  const frozenSource = document.createElement('pre');
  frozenSource.textContent = s.modelSource;
  frozen.appendChild(frozenTitle);
  frozen.appendChild(frozenSource);
  root.appendChild(frozen);

  const objectRow = document.createElement('div');
  objectRow.className = 'field-row';
  const objectLabel = document.createElement('label');
  objectLabel.textContent = 'Test object ';
  const objectSelect = document.createElement('select');
  objectSelect.className = 'test-object';
  for (const obj of s.objects) {
    if (obj.id === s.trainingObjectId) continue;
    const option = document.createElement('option');
    option.value = obj.id;
    option.textContent = obj.display_name;
    objectSelect.appendChild(option);
  }
  objectLabel.appendChild(objectSelect);
  objectRow.appendChild(objectLabel);
  root.appendChild(objectRow);

  const partsHost = document.createElement('div');
  partsHost.className = 'parts';
  root.appendChild(partsHost);

  const submit = document.createElement('button');
  submit.className = 'submit-transfer';
  submit.textContent = 'Run transfer';
  root.appendChild(submit);

  const verdictHost = document.createElement('div');
  verdictHost.className = 'verdicts';
  root.appendChild(verdictHost);

  const vocabulary = modelVocabulary();

  function addLabel(partId: string, label: string): void {
    const entries = { ...store.get().testEntries };
    const existing = entries[partId] ?? [];
    if (!existing.includes(label)) {
      entries[partId] = [...existing, label];
      store.set({ testEntries: entries });
    }
    renderParts();
  }

  function renderParts(): void {
    const state = store.get();
    const obj = state.objects.find((o) => o.id === objectSelect.value);
    partsHost.innerHTML = '';
    if (!obj) return;
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
      for (const label of state.testEntries[part.id] ?? []) {
        const chip = document.createElement('span');
        chip.className = 'chip';
        chip.textContent = label;
        if (!vocabulary.includes(label)) {
          const badge = document.createElement('span');
          badge.className = 'novel-badge';
          badge.title = 'this label is not in the model; it cannot help reach the goal';
          badge.textContent = 'novel';
          chip.appendChild(badge);
        }
        const remove = document.createElement('button');
        remove.textContent = '×';
        remove.title = 'remove label';
        remove.addEventListener('click', () => {
          const entries = { ...store.get().testEntries };
          entries[part.id] = (entries[part.id] ?? []).filter((l) => l !== label);
          store.set({ testEntries: entries });
          renderParts();
        });
        chip.appendChild(remove);
        chips.appendChild(chip);
      }
      row.appendChild(chips);

      const vocabSelect = document.createElement('select');
      vocabSelect.className = 'vocab-select';
      const placeholder = document.createElement('option');
      placeholder.value = '';
      placeholder.textContent = 'model vocabulary…';
      vocabSelect.appendChild(placeholder);
      for (const label of vocabulary) {
        const option = document.createElement('option');
        option.value = label;
        option.textContent = label;
        vocabSelect.appendChild(option);
      }
      vocabSelect.addEventListener('change', () => {
        if (vocabSelect.value) {
          addLabel(part.id, vocabSelect.value);
          vocabSelect.value = '';
        }
      });
      row.appendChild(vocabSelect);

      const novelInput = document.createElement('input');
      novelInput.type = 'text';
      novelInput.placeholder = 'or a new label';
      const addNovel = document.createElement('button');
      addNovel.className = 'add-novel';
      addNovel.textContent = 'Add';
      addNovel.addEventListener('click', () => {
        const label = novelInput.value.trim();
        if (!label) return;
        addLabel(part.id, label);
        novelInput.value = '';
      });
      row.appendChild(novelInput);
      row.appendChild(addNovel);

      partsHost.appendChild(row);
    }
  }

  function renderVerdict(result: TransferResultDoc): HTMLElement {
    const card = document.createElement('div');
    card.className = `verdict verdict-${result.outcome}`;

    const title = document.createElement('p');
    title.className = 'verdict-title';
    title.textContent = `${result.test_object}: ${result.outcome} (${result.relation} transfer)`;
    card.appendChild(title);

    if (result.outcome === 'success' && result.plan) {
      const list = document.createElement('ol');
      list.className = 'plan-steps';
      for (const step of result.plan.steps) {
        const item = document.createElement('li');
        item.textContent = step.text;
        list.appendChild(item);
      }
      card.appendChild(list);
    } else if (result.reason) {
      const reason = document.createElement('p');
      reason.className = 'verdict-reason';
      reason.textContent = `reason: ${result.reason}`;
      card.appendChild(reason);
    }

    if (result.warnings.length > 0) {
      const warnings = document.createElement('ul');
      warnings.className = 'verdict-warnings';
      for (const warning of result.warnings) {
        const item = document.createElement('li');
        item.textContent = warning;
        warnings.appendChild(item);
      }
      card.appendChild(warnings);
    }
    return card;
  }

  function syncVerdicts(): void {
    verdictHost.innerHTML = '';
    for (const result of store.get().transferResults) {
      verdictHost.appendChild(renderVerdict(result));
    }
  }

  objectSelect.addEventListener('change', () => {
    store.set({ testObjectId: objectSelect.value, testEntries: {} });
    renderParts();
  });

  submit.addEventListener('click', () => {
    void (async () => {
      const state = store.get();
      if (!state.sessionId) return;
      try {
        const response = await submitTransfer(state.sessionId, {
          version: state.version,
          test_object: objectSelect.value,
          entries: state.testEntries,
        });
        store.set({
          version: response.version,
          transferResults: [...state.transferResults, response.result],
          maxCompletedStep: 2,
        });
        syncVerdicts();
      } catch (err) {
        if (err instanceof StaleSessionError) {
          store.set({ staleSession: true });
          return;
        }
        store.set({
          banner: { kind: 'blocking', text: `transfer failed: ${String(err)}` },
        });
      }
    })();
  });

  if (objectSelect.value) {
    store.set({ testObjectId: objectSelect.value });
  }
  renderParts();
  syncVerdicts();
}
