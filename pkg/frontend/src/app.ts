/** Page state and wiring: one in-flight request, stale answers dropped. */

import {
  AdviceRejected,
  AdvisorUnreachable,
  requestAdvice,
  type AdviseResponse,
} from './api.js';
import { HAND_SIZE, isComplete, toggleCard } from './hand.js';
import { createCardPicker, createSelectionStrip } from './picker.js';
import { createRankingList } from './rankings.js';
import { rankingSections } from './view.js';

const POSITIONS = ['forehand', 'middlehand', 'rearhand'];
const GAMES = ['', 'grand', 'clubs', 'spades', 'hearts', 'diamonds', 'null'];

interface AppState {
  selected: string[];
  position: string;
  bid: number;
  game: string;
  requestSeq: number;
  busy: boolean;
  response: AdviseResponse | null;
  error: { message: string; retryable: boolean } | null;
}

export function createApp(root: HTMLElement): void {
  const state: AppState = {
    selected: [],
    position: 'forehand',
    bid: 0,
    game: '',
    requestSeq: 0,
    busy: false,
    response: null,
    error: null,
  };

  const pickerHost = document.createElement('div');
  const stripHost = document.createElement('div');
  const form = document.createElement('div');
  form.className = 'context-form';
  const statusHost = document.createElement('div');
  const resultHost = document.createElement('div');

  const positionSelect = document.createElement('select');
  for (const name of POSITIONS) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    positionSelect.appendChild(option);
  }
  positionSelect.addEventListener('change', () => {
    state.position = positionSelect.value;
  });

  const bidInput = document.createElement('input');
  bidInput.type = 'number';
  bidInput.min = '0';
  bidInput.value = '0';
  bidInput.addEventListener('change', () => {
    state.bid = Number(bidInput.value) || 0;
  });

  const gameSelect = document.createElement('select');
  for (const name of GAMES) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name === '' ? 'all games' : name;
    gameSelect.appendChild(option);
  }
  gameSelect.addEventListener('change', () => {
    state.game = gameSelect.value;
  });

  const submit = document.createElement('button');
  submit.type = 'button';
  submit.id = 'advise';
  submit.textContent = 'advise';
  submit.addEventListener('click', () => void ask());

  form.append(
    labelled('position', positionSelect),
    labelled('bid', bidInput),
    labelled('game', gameSelect),
    submit,
  );

  function labelled(text: string, control: HTMLElement): HTMLElement {
    const label = document.createElement('label');
    label.textContent = text + ' ';
    label.appendChild(control);
    return label;
  }

  function renderPicker(): void {
    pickerHost.replaceChildren(
      createCardPicker({ selected: state.selected, onToggle: toggle }),
    );
    stripHost.replaceChildren(createSelectionStrip(state.selected));
    submit.disabled = !isComplete(state.selected) || state.busy;
  }

  function renderStatus(): void {
    statusHost.replaceChildren();
    if (state.busy) {
      const note = document.createElement('p');
      note.className = 'busy';
      note.textContent = 'asking the advisor...';
      statusHost.appendChild(note);
    }
    if (state.error) {
      const banner = document.createElement('div');
      banner.className = 'error';
      const text = document.createElement('span');
      text.textContent = state.error.message;
      banner.appendChild(text);
      if (state.error.retryable) {
        const retry = document.createElement('button');
        retry.type = 'button';
        retry.textContent = 'retry';
        retry.addEventListener('click', () => void ask());
        banner.appendChild(retry);
      }
      statusHost.appendChild(banner);
    }
  }

  function renderResult(): void {
    resultHost.replaceChildren();
    if (!state.response) {
      return; // nothing to show; scores only ever come from a response
    }
    if (state.response.truncated) {
      const note = document.createElement('p');
      note.className = 'truncated';
      note.textContent = 'time budget hit; later game types were skipped';
      resultHost.appendChild(note);
    }
    resultHost.appendChild(createRankingList(rankingSections(state.response)));
  }

  function toggle(code: string): void {
    state.selected = toggleCard(state.selected, code);
    renderPicker();
  }

  async function ask(): Promise<void> {
    if (!isComplete(state.selected)) {
      return;
    }
    const seq = ++state.requestSeq;
    state.busy = true;
    state.error = null;
    renderPicker();
    renderStatus();
    try {
      const response = await requestAdvice({
        hand: state.selected,
        position: state.position,
        bid: state.bid,
        ...(state.game ? { game: state.game } : {}),
      });
      if (seq !== state.requestSeq) {
        return; // a newer request is in flight; drop this answer
      }
      state.response = response;
    } catch (err) {
      if (seq !== state.requestSeq) {
        return;
      }
      state.response = null;
      if (err instanceof AdviceRejected) {
        state.error = { message: err.message, retryable: false };
      } else if (err instanceof AdvisorUnreachable) {
        state.error = { message: 'advisor unreachable: ' + err.message, retryable: true };
      } else {
        state.error = { message: String(err), retryable: true };
      }
    } finally {
      if (seq === state.requestSeq) {
        state.busy = false;
        renderPicker();
        renderStatus();
        renderResult();
      }
    }
  }

  const title = document.createElement('h1');
  title.textContent = 'skat discard advisor';
  const hint = document.createElement('p');
  hint.className = 'hint';
  hint.textContent = `pick the ${HAND_SIZE} cards you hold after taking the skat`;

  root.replaceChildren(title, hint, pickerHost, stripHost, form, statusHost, resultHost);
  renderPicker();
  renderStatus();
}
